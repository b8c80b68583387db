#include "ock/model_io.hpp"

#include <fstream>
#include <json.hpp>

namespace ock {

using nlohmann::json;

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw ParseError("model matrix must be a non-empty array");
    Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    Eigen::Index cols = static_cast<Eigen::Index>(j.at(0).size());
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const json& row = j.at(i);
        if (static_cast<Eigen::Index>(row.size()) != cols)
            throw ParseError("model matrix rows are ragged");
        for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = row.at(c).get<double>();
    }
    return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

Eigen::VectorXd vector_from_json(const json& j) {
    Eigen::VectorXd v(j.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = j.at(i).get<double>();
    return v;
}

json kernel_to_json(const KernelSpec& spec) {
    json k;
    k["variant"] = spec.kind == KernelKind::Gaussian ? "gaussian" : "random_fourier";
    k["lengthscale"] = spec.lengthscale;
    if (spec.kind == KernelKind::RandomFourier) {
        k["feature_count"] = spec.feature_count;
        k["seed"] = spec.seed;
    }
    return k;
}

KernelSpec kernel_from_json(const json& k) {
    std::string variant = k.at("variant").get<std::string>();
    if (variant == "gaussian") return KernelSpec::gaussian(k.at("lengthscale").get<double>());
    if (variant == "random_fourier")
        return KernelSpec::random_fourier(k.at("lengthscale").get<double>(),
                                          k.at("feature_count").get<int>(),
                                          k.at("seed").get<std::uint64_t>());
    throw ParseError("unknown kernel variant '" + variant + "'");
}

json feature_map_to_json(const FeatureMap& map) {
    json m;
    m["frequencies"] = matrix_to_json(map.frequencies);
    m["phases"] = vector_to_json(map.phases);
    m["scale"] = map.scale;
    return m;
}

FeatureMap feature_map_from_json(const json& m) {
    FeatureMap map;
    map.frequencies = matrix_from_json(m.at("frequencies"));
    map.phases = vector_from_json(m.at("phases"));
    map.scale = m.at("scale").get<double>();
    map.validate();
    return map;
}

json load_checked(const std::string& path, const std::string& expected_type) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open file");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path, 0, e.what());
    }
    try {
        int version = j.at("format_version").get<int>();
        if (version != kModelFormatVersion)
            throw ParseError(path, 0,
                             "unsupported format_version " + std::to_string(version));
        std::string type = j.at("type").get<std::string>();
        if (type != expected_type)
            throw ParseError(path, 0, "expected type '" + expected_type + "', got '" + type + "'");
    } catch (const json::exception& e) {
        throw ParseError(path, 0, e.what());
    }
    return j;
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open '" + path + "' for writing");
    out << j.dump(2) << "\n";
}

}  // namespace

void save_model(const std::string& path, const OckModel& model) {
    model.validate();
    json j;
    j["format_version"] = kModelFormatVersion;
    j["type"] = "ock_model";
    j["path"] = model.path == ModelPath::Implicit ? "implicit" : "explicit";
    j["kernel"] = kernel_to_json(model.kernel);
    j["lambda"] = model.lambda;
    j["dimension"] = model.dimension;
    if (model.path == ModelPath::Implicit) {
        json segs;
        json t_start = json::array(), t_end = json::array();
        json series = json::array(), index = json::array();
        json x_start = json::array(), x_end = json::array();
        for (const Segment& s : model.segments) {
            t_start.push_back(s.t_start);
            t_end.push_back(s.t_end);
            series.push_back(s.series_id);
            index.push_back(s.index_in_series);
            x_start.push_back(vector_to_json(s.x_start));
            x_end.push_back(vector_to_json(s.x_end));
        }
        segs["t_start"] = std::move(t_start);
        segs["t_end"] = std::move(t_end);
        segs["series_id"] = std::move(series);
        segs["index_in_series"] = std::move(index);
        segs["x_start"] = std::move(x_start);
        segs["x_end"] = std::move(x_end);
        j["segments"] = std::move(segs);
        j["alpha"] = matrix_to_json(model.alpha);
    } else {
        j["feature_map"] = feature_map_to_json(model.feature_map);
        j["weights"] = matrix_to_json(model.weights);
    }
    write_json(path, j);
}

OckModel load_model(const std::string& path) {
    json j = load_checked(path, "ock_model");
    OckModel model;
    try {
        std::string p = j.at("path").get<std::string>();
        if (p != "implicit" && p != "explicit")
            throw ParseError(path, 0, "unknown model path '" + p + "'");
        model.path = p == "implicit" ? ModelPath::Implicit : ModelPath::Explicit;
        model.kernel = kernel_from_json(j.at("kernel"));
        model.lambda = j.at("lambda").get<double>();
        model.dimension = j.at("dimension").get<int>();
        if (model.path == ModelPath::Implicit) {
            const json& segs = j.at("segments");
            std::size_t n = segs.at("t_start").size();
            for (std::size_t i = 0; i < n; ++i) {
                Segment s;
                s.t_start = segs.at("t_start").at(i).get<double>();
                s.t_end = segs.at("t_end").at(i).get<double>();
                s.series_id = segs.at("series_id").at(i).get<int>();
                s.index_in_series = segs.at("index_in_series").at(i).get<int>();
                s.x_start = vector_from_json(segs.at("x_start").at(i));
                s.x_end = vector_from_json(segs.at("x_end").at(i));
                model.segments.push_back(std::move(s));
            }
            model.alpha = matrix_from_json(j.at("alpha"));
        } else {
            model.feature_map = feature_map_from_json(j.at("feature_map"));
            model.weights = matrix_from_json(j.at("weights"));
        }
    } catch (const json::exception& e) {
        throw ParseError(path, 0, e.what());
    }
    model.validate();
    return model;
}

void save_pde_model(const std::string& path, const PdeModel& model) {
    model.validate();
    json j;
    j["format_version"] = kModelFormatVersion;
    j["type"] = "pde_model";
    j["gamma"] = vector_to_json(model.gamma);
    j["delta"] = vector_to_json(model.delta);
    j["map_alpha"] = feature_map_to_json(model.map_alpha);
    j["map_f"] = feature_map_to_json(model.map_f);
    j["lambda1"] = model.lambda1;
    j["lambda2"] = model.lambda2;
    j["grid"] = {{"nx", model.grid_nx},
                 {"ny", model.grid_ny},
                 {"x_range", {model.x_range[0], model.x_range[1]}},
                 {"u_range", {model.u_range[0], model.u_range[1]}}};
    write_json(path, j);
}

PdeModel load_pde_model(const std::string& path) {
    json j = load_checked(path, "pde_model");
    PdeModel model;
    try {
        model.gamma = vector_from_json(j.at("gamma"));
        model.delta = vector_from_json(j.at("delta"));
        model.map_alpha = feature_map_from_json(j.at("map_alpha"));
        model.map_f = feature_map_from_json(j.at("map_f"));
        model.lambda1 = j.at("lambda1").get<double>();
        model.lambda2 = j.at("lambda2").get<double>();
        const json& g = j.at("grid");
        model.grid_nx = g.at("nx").get<int>();
        model.grid_ny = g.at("ny").get<int>();
        model.x_range = {g.at("x_range").at(0).get<double>(), g.at("x_range").at(1).get<double>()};
        model.u_range = {g.at("u_range").at(0).get<double>(), g.at("u_range").at(1).get<double>()};
    } catch (const json::exception& e) {
        throw ParseError(path, 0, e.what());
    }
    model.validate();
    return model;
}

}  // namespace ock
