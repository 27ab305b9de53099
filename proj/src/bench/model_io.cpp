#include "nesvm/model_io.hpp"

#include "nesvm/error.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>

namespace nesvm {

namespace {

using json = nlohmann::ordered_json;

constexpr std::string_view magic = "NESVM-MODEL";

std::string kernel_name(KernelType t) { return t == KernelType::rbf ? "rbf" : "linear"; }

std::string scaling_name(io::ScalingMode m) {
    switch (m) {
        case io::ScalingMode::none: return "none";
        case io::ScalingMode::minmax_per_feature: return "minmax";
        case io::ScalingMode::unit_l2_per_sample: return "unit-l2";
    }
    return "none";
}

template <typename T>
T field(const json &j, const char *key) {
    if (!j.contains(key)) {
        throw error{errc::bad_model_file, std::string{"missing field '"} + key + "'"};
    }
    try {
        return j.at(key).get<T>();
    } catch (const json::exception &e) {
        throw error{errc::bad_model_file, std::string{"field '"} + key + "': " + e.what()};
    }
}

}  // namespace

double ModelFile::decision_value(std::span<const double> x) const {
    if (x.size() != feature_dimension) {
        throw error{errc::dimension_mismatch, "sample has " + std::to_string(x.size()) + " features, model expects " +
                                                  std::to_string(feature_dimension)};
    }
    const double b = spec.bias ? weights.back() : 0.0;
    if (spec.kernel.type == KernelType::linear) {
        return dot(std::span<const double>{weights}.first(feature_dimension), x) + b;
    }
    double s = 0.0;
    for (std::size_t j = 0; j < support_points.rows(); ++j) {
        s += weights[j] * support_labels[j] * rbf_kernel(support_points.row(j), x, *spec.kernel.width);
    }
    return s + b;
}

ModelFile make_model_file(const TrainingProblem &problem, const TrainedModel &model, io::ScalingSpec scaling) {
    ModelFile out;
    out.spec = problem.spec();
    out.spec.mu = model.spec.mu;
    out.spec.nu = model.spec.nu;
    out.feature_dimension = problem.points().cols();
    out.scaling = std::move(scaling);
    if (out.spec.kernel.type == KernelType::linear) {
        out.weights = model.w;
        return out;
    }
    const std::size_t n = problem.points().rows();
    const auto y = problem.labels();
    std::vector<std::size_t> support;
    for (std::size_t j = 0; j < n; ++j) {
        if (model.w[j] != 0.0) {
            support.push_back(j);
        }
    }
    out.support_points = Matrix{support.size(), out.feature_dimension};
    for (std::size_t s = 0; s < support.size(); ++s) {
        const auto src = problem.points().row(support[s]);
        std::copy(src.begin(), src.end(), out.support_points.row(s).begin());
        out.weights.push_back(model.w[support[s]]);
        out.support_labels.push_back(y[support[s]]);
    }
    if (out.spec.bias) {
        out.weights.push_back(model.w.back());
    }
    return out;
}

std::string serialize_model(const ModelFile &model) {
    json body;
    body["variant"] = to_string(model.spec.variant);
    body["C"] = model.spec.C;
    body["mu"] = model.spec.mu;
    body["nu"] = model.spec.nu ? json(*model.spec.nu) : json(nullptr);
    body["kernel"] = {{"type", kernel_name(model.spec.kernel.type)},
                      {"width", model.spec.kernel.width ? json(*model.spec.kernel.width) : json(nullptr)}};
    body["bias"] = model.spec.bias;
    body["feature_dimension"] = model.feature_dimension;
    body["scaling"] = {{"mode", scaling_name(model.scaling.mode)}, {"mins", model.scaling.mins}, {"maxs", model.scaling.maxs}};
    body["weights"] = model.weights;
    json points = json::array();
    for (std::size_t i = 0; i < model.support_points.rows(); ++i) {
        const auto r = model.support_points.row(i);
        points.push_back(std::vector<double>(r.begin(), r.end()));
    }
    body["support"] = {{"labels", model.support_labels}, {"points", std::move(points)}};
    return std::string{magic} + " " + std::to_string(ModelFile::format_version) + "\n" + body.dump(1) + "\n";
}

ModelFile parse_model(std::string_view text) {
    const auto newline = text.find('\n');
    const std::string header{text.substr(0, newline)};
    if (header != std::string{magic} + " " + std::to_string(ModelFile::format_version)) {
        throw error{errc::bad_model_file, "unrecognized header '" + header + "'"};
    }
    json body;
    try {
        body = json::parse(text.substr(newline == std::string_view::npos ? text.size() : newline + 1));
    } catch (const json::exception &e) {
        throw error{errc::bad_model_file, e.what()};
    }
    ModelFile m;
    m.spec.variant = parse_variant(field<std::string>(body, "variant"));
    m.spec.C = field<double>(body, "C");
    m.spec.mu = field<double>(body, "mu");
    if (!body.at("nu").is_null()) {
        m.spec.nu = field<double>(body, "nu");
    }
    const json &kernel = body.at("kernel");
    const auto kname = field<std::string>(kernel, "type");
    if (kname != "linear" && kname != "rbf") {
        throw error{errc::bad_model_file, "unknown kernel '" + kname + "'"};
    }
    m.spec.kernel.type = kname == "rbf" ? KernelType::rbf : KernelType::linear;
    if (!kernel.at("width").is_null()) {
        m.spec.kernel.width = field<double>(kernel, "width");
    }
    m.spec.bias = field<bool>(body, "bias");
    m.feature_dimension = field<std::size_t>(body, "feature_dimension");
    const json &scaling = body.at("scaling");
    m.scaling.mode = io::parse_scaling_mode(field<std::string>(scaling, "mode"));
    m.scaling.mins = field<Vector>(scaling, "mins");
    m.scaling.maxs = field<Vector>(scaling, "maxs");
    m.weights = field<Vector>(body, "weights");
    const json &support = body.at("support");
    m.support_labels = field<Vector>(support, "labels");
    const auto points = field<std::vector<Vector>>(support, "points");
    m.support_points = Matrix{points.size(), m.feature_dimension};
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].size() != m.feature_dimension) {
            throw error{errc::bad_model_file, "support point " + std::to_string(i) + " has the wrong dimension"};
        }
        std::copy(points[i].begin(), points[i].end(), m.support_points.row(i).begin());
    }

    const std::size_t bias = m.spec.bias ? 1 : 0;
    const std::size_t expected =
        m.spec.kernel.type == KernelType::linear ? m.feature_dimension + bias : m.support_points.rows() + bias;
    if (m.weights.size() != expected || m.support_labels.size() != m.support_points.rows()) {
        throw error{errc::bad_model_file, "weight count does not match the model layout"};
    }
    if (m.spec.kernel.type == KernelType::rbf && !m.spec.kernel.width) {
        throw error{errc::bad_model_file, "RBF model without a kernel width"};
    }
    return m;
}

void save_model(const std::filesystem::path &path, const ModelFile &model) {
    std::ofstream out{path, std::ios::binary};
    if (!out) {
        throw error{errc::io_failure, "cannot write " + path.string()};
    }
    out << serialize_model(model);
}

ModelFile load_model(const std::filesystem::path &path) {
    std::ifstream in{path, std::ios::binary};
    if (!in) {
        throw error{errc::io_failure, "cannot open " + path.string()};
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str());
}

double accuracy(const ModelFile &model, std::span<const LabeledRow> rows) {
    if (rows.empty()) {
        return 0.0;
    }
    std::size_t correct = 0;
    for (const auto &row : rows) {
        correct += static_cast<double>(model.predict(row.features)) == row.label ? 1 : 0;
    }
    return static_cast<double>(correct) / static_cast<double>(rows.size());
}

}  // namespace nesvm
