#include "crlb/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace crlb {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    return out;
}

std::ifstream open_in(const std::string& path, std::ios::openmode mode = std::ios::in) {
    std::ifstream in(path, mode);
    if (!in) throw std::runtime_error("cannot read '" + path + "'");
    return in;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream stream(line);
    std::string cell;
    while (std::getline(stream, cell, ',')) out.push_back(cell);
    return out;
}

void write_vector_row(std::ofstream& out, int block, const std::string& role,
                      const VectorXd& v) {
    out << block << ',' << role;
    for (int i = 0; i < v.size(); ++i) out << ',' << format_double(v[i]);
    out << '\n';
}

}  // namespace

void write_dataset_csv(const ContrastiveDataset& dataset, const std::string& path) {
    dataset.validate();
    auto out = open_out(path);
    out << "block,role";
    for (int i = 0; i < dataset.dim(); ++i) out << ",c" << i;
    out << '\n';
    for (int j = 0; j < dataset.size(); ++j) {
        const auto& block = dataset.blocks[static_cast<std::size_t>(j)];
        write_vector_row(out, j, "x", block.anchor);
        write_vector_row(out, j, "xp", block.positive);
        for (std::size_t i = 0; i < block.negatives.size(); ++i)
            write_vector_row(out, j, "xn_" + std::to_string(i + 1), block.negatives[i]);
    }
}

ContrastiveDataset read_dataset_csv(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("dataset csv: empty file");
    const auto header = split_csv_line(line);
    if (header.size() < 3 || header[0] != "block" || header[1] != "role")
        throw std::runtime_error("dataset csv: unexpected header");
    const int dim = static_cast<int>(header.size()) - 2;

    ContrastiveDataset ds;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (static_cast<int>(cells.size()) != dim + 2)
            throw std::runtime_error("dataset csv: ragged row");
        const int block = std::stoi(cells[0]);
        if (block == static_cast<int>(ds.blocks.size())) ds.blocks.emplace_back();
        if (block != static_cast<int>(ds.blocks.size()) - 1)
            throw std::runtime_error("dataset csv: blocks out of order");
        VectorXd v(dim);
        for (int i = 0; i < dim; ++i) v[i] = std::stod(cells[static_cast<std::size_t>(i) + 2]);
        const std::string& role = cells[1];
        if (role == "x")
            ds.blocks.back().anchor = std::move(v);
        else if (role == "xp")
            ds.blocks.back().positive = std::move(v);
        else if (role.rfind("xn_", 0) == 0)
            ds.blocks.back().negatives.push_back(std::move(v));
        else
            throw std::runtime_error("dataset csv: unknown role '" + role + "'");
    }
    ds.validate();
    return ds;
}

namespace {

constexpr std::uint32_t kCheckpointMagic = 0x43524C46;  // "CRLF"
constexpr std::uint32_t kCheckpointVersion = 1;

template <typename T>
void put(std::ofstream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T take(std::ifstream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw std::runtime_error("checkpoint: truncated file");
    return v;
}

void put_matrix(std::ofstream& out, const MatrixXd& m) {
    put<std::uint64_t>(out, static_cast<std::uint64_t>(m.rows()));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(m.cols()));
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) put<double>(out, m(r, c));
}

MatrixXd take_matrix(std::ifstream& in) {
    const auto rows = take<std::uint64_t>(in);
    const auto cols = take<std::uint64_t>(in);
    MatrixXd m(static_cast<int>(rows), static_cast<int>(cols));
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) m(r, c) = take<double>(in);
    return m;
}

}  // namespace

void write_checkpoint(const FeatureMap& f, const std::string& path) {
    auto out = open_out(path, std::ios::out | std::ios::binary);
    put(out, kCheckpointMagic);
    put(out, kCheckpointVersion);
    put<std::uint8_t>(out, f.is_linear() ? 0 : 1);
    const auto radius = f.output_radius();
    put<std::uint8_t>(out, radius ? 1 : 0);
    put<double>(out, radius.value_or(0.0));
    if (f.is_linear()) {
        const auto& lin = f.linear();
        put<std::uint8_t>(out, static_cast<std::uint8_t>(lin.constraint));
        put<double>(out, lin.p);
        put<double>(out, lin.budget);
        put_matrix(out, lin.weight);
        return;
    }
    const auto& mlp = f.mlp();
    put<std::uint64_t>(out, static_cast<std::uint64_t>(mlp.layers.size()));
    for (std::size_t l = 0; l < mlp.layers.size(); ++l) {
        put<double>(out, mlp.layer_budgets[l]);
        put_matrix(out, mlp.layers[l]);
    }
    put<double>(out, mlp.head_budget);
    put_matrix(out, mlp.head);
}

FeatureMap read_checkpoint(const std::string& path) {
    auto in = open_in(path, std::ios::in | std::ios::binary);
    if (take<std::uint32_t>(in) != kCheckpointMagic)
        throw std::runtime_error("checkpoint: bad magic");
    if (take<std::uint32_t>(in) != kCheckpointVersion)
        throw std::runtime_error("checkpoint: unsupported version");
    const auto variant = take<std::uint8_t>(in);
    const bool has_radius = take<std::uint8_t>(in) != 0;
    const double radius = take<double>(in);
    std::optional<double> out_radius;
    if (has_radius) out_radius = radius;
    if (variant == 0) {
        const auto constraint = static_cast<MatrixNormKind>(take<std::uint8_t>(in));
        const double p = take<double>(in);
        const double budget = take<double>(in);
        return make_linear_map(take_matrix(in), constraint, p, budget, out_radius);
    }
    const auto n_layers = take<std::uint64_t>(in);
    std::vector<MatrixXd> layers;
    std::vector<double> budgets;
    for (std::uint64_t l = 0; l < n_layers; ++l) {
        budgets.push_back(take<double>(in));
        layers.push_back(take_matrix(in));
    }
    const double head_budget = take<double>(in);
    return make_mlp_map(std::move(layers), std::move(budgets), take_matrix(in), head_budget,
                        out_radius);
}

void export_checkpoint_csv(const FeatureMap& f, const std::string& path) {
    auto out = open_out(path);
    out << "matrix,row,col,value\n";
    const auto mats = param_matrices(f);
    for (std::size_t m = 0; m < mats.size(); ++m)
        for (int r = 0; r < mats[m]->rows(); ++r)
            for (int c = 0; c < mats[m]->cols(); ++c)
                out << m << ',' << r << ',' << c << ','
                    << format_double((*mats[m])(r, c)) << '\n';
}

}  // namespace crlb
