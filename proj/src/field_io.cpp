#include "ualign/field_io.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace ualign {

void write_field(const ScalarField& f, const std::string& path) {
    nlohmann::json header;
    header["dim"] = f.grid().dim();
    header["n_per_dim"] = f.grid().n_per_dim();
    header["length"] = f.grid().length();
    header["representation"] =
        f.representation() == Representation::Physical ? "physical" : "spectral";
    header["time"] = f.time();

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_field: cannot open " + path);
    out << header.dump() << '\n';

    if (f.representation() == Representation::Physical) {
        auto v = f.physical();
        out.write(reinterpret_cast<const char*>(v.data()),
                  static_cast<std::streamsize>(v.size() * sizeof(double)));
    } else {
        auto v = f.spectral();
        out.write(reinterpret_cast<const char*>(v.data()),
                  static_cast<std::streamsize>(v.size() * 2 * sizeof(double)));
    }
    if (!out) throw std::runtime_error("write_field: short write to " + path);
}

ScalarField read_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("read_field: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("read_field: missing header in " + path);
    auto header = nlohmann::json::parse(line);

    auto grid = make_grid(header.at("dim").get<int>(), header.at("n_per_dim").get<int>(),
                          header.at("length").get<double>());
    double time = header.at("time").get<double>();
    std::string repr = header.at("representation").get<std::string>();

    if (repr == "physical") {
        std::vector<double> v(grid->size());
        in.read(reinterpret_cast<char*>(v.data()),
                static_cast<std::streamsize>(v.size() * sizeof(double)));
        if (!in) throw std::runtime_error("read_field: short payload in " + path);
        return ScalarField(grid, std::move(v), time);
    }
    if (repr == "spectral") {
        std::vector<std::complex<double>> v(grid->size());
        in.read(reinterpret_cast<char*>(v.data()),
                static_cast<std::streamsize>(v.size() * 2 * sizeof(double)));
        if (!in) throw std::runtime_error("read_field: short payload in " + path);
        return ScalarField(grid, std::move(v), time);
    }
    throw std::runtime_error("read_field: unknown representation '" + repr + "' in " + path);
}

} // namespace ualign
