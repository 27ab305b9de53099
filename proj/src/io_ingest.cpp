#include "nesvm/io_ingest.hpp"

#include "nesvm/error.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace nesvm::io {

namespace {

std::string at_line(std::size_t line) { return "line " + std::to_string(line) + ": "; }

bool parse_real(std::string_view token, double &out) {
    if (token.empty()) {
        return false;
    }
    const std::string buf{token};
    char *end = nullptr;
    out = std::strtod(buf.c_str(), &end);
    return end == buf.c_str() + buf.size() && std::isfinite(out);
}

double map_label(std::string_view token, std::size_t line) {
    double raw{};
    if (!parse_real(token, raw)) {
        throw error{errc::malformed_line, at_line(line) + "label '" + std::string{token} + "' is not a number"};
    }
    if (raw == 1.0) {
        return 1.0;
    }
    if (raw == -1.0 || raw == 0.0) {
        return -1.0;
    }
    throw error{errc::unmappable_label,
                at_line(line) + "label '" + std::string{token} + "' is not one of -1, 0, +1, 1"};
}

std::vector<std::string_view> tokenize(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) {
            ++i;
        }
        const std::size_t start = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') {
            ++i;
        }
        if (i > start) {
            out.push_back(s.substr(start, i - start));
        }
    }
    return out;
}

std::string read_gzip(const std::filesystem::path &path) {
    gzFile f = gzopen(path.c_str(), "rb");
    if (f == nullptr) {
        throw error{errc::io_failure, "cannot open " + path.string()};
    }
    std::string content;
    std::array<char, 1 << 16> buf{};
    int got = 0;
    while ((got = gzread(f, buf.data(), static_cast<unsigned>(buf.size()))) > 0) {
        content.append(buf.data(), static_cast<std::size_t>(got));
    }
    const bool failed = got < 0;
    gzclose(f);
    if (failed) {
        throw error{errc::io_failure, "corrupt gzip stream in " + path.string()};
    }
    return content;
}

/// Fisher–Yates over mt19937_64 so the permutation does not depend on the standard library.
void shuffle(std::vector<std::size_t> &idx, std::mt19937_64 &rng) {
    for (std::size_t i = idx.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(idx[i - 1], idx[j]);
    }
}

}  // namespace

std::vector<SvmLightRecord> parse_svmlight(std::istream &in) {
    std::vector<SvmLightRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view{line};
        if (const auto hash = view.find('#'); hash != std::string_view::npos) {
            view = view.substr(0, hash);
        }
        const auto tokens = tokenize(view);
        if (tokens.empty()) {
            continue;
        }
        SvmLightRecord rec;
        rec.label = map_label(tokens[0], line_no);
        for (std::size_t t = 1; t < tokens.size(); ++t) {
            const auto tok = tokens[t];
            const auto colon = tok.find(':');
            if (colon == std::string_view::npos || colon == 0) {
                throw error{errc::malformed_line, at_line(line_no) + "expected <index>:<value>, got '" + std::string{tok} + "'"};
            }
            std::size_t index = 0;
            const auto idx_str = tok.substr(0, colon);
            const auto [ptr, ec] = std::from_chars(idx_str.data(), idx_str.data() + idx_str.size(), index);
            if (ec != std::errc{} || ptr != idx_str.data() + idx_str.size() || index == 0) {
                throw error{errc::malformed_line, at_line(line_no) + "bad feature index '" + std::string{idx_str} + "'"};
            }
            double value{};
            if (!parse_real(tok.substr(colon + 1), value)) {
                throw error{errc::malformed_line, at_line(line_no) + "bad feature value in '" + std::string{tok} + "'"};
            }
            if (!rec.entries.empty() && index <= rec.entries.back().first) {
                throw error{errc::non_monotonic_index, at_line(line_no) + "index " + std::to_string(index) +
                                                           " does not increase"};
            }
            rec.entries.emplace_back(index, value);
        }
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<SvmLightRecord> read_svmlight_file(const std::filesystem::path &path) {
    try {
        if (path.extension() == ".gz") {
            std::istringstream in{read_gzip(path)};
            return parse_svmlight(in);
        }
        std::ifstream in{path};
        if (!in) {
            throw error{errc::io_failure, "cannot open " + path.string()};
        }
        return parse_svmlight(in);
    } catch (const error &e) {
        if (e.code() == errc::io_failure) {
            throw;
        }
        // prefix the file name, keep the code
        throw error{e.code(), path.string() + ": " + std::string{e.what()}};
    }
}

std::string serialize_svmlight(std::span<const SvmLightRecord> records) {
    std::string out;
    std::array<char, 64> buf{};
    for (const auto &rec : records) {
        out += rec.label > 0 ? "+1" : "-1";
        for (const auto &[index, value] : rec.entries) {
            std::snprintf(buf.data(), buf.size(), " %zu:%.17g", index, value);
            out += buf.data();
        }
        out += '\n';
    }
    return out;
}

void write_svmlight_file(const std::filesystem::path &path, std::span<const SvmLightRecord> records) {
    std::ofstream out{path, std::ios::binary};
    if (!out) {
        throw error{errc::io_failure, "cannot write " + path.string()};
    }
    out << serialize_svmlight(records);
}

std::size_t max_feature_index(std::span<const SvmLightRecord> records) noexcept {
    std::size_t m = 0;
    for (const auto &rec : records) {
        if (!rec.entries.empty()) {
            m = std::max(m, rec.entries.back().first);
        }
    }
    return m;
}

std::vector<LabeledRow> densify(std::span<const SvmLightRecord> records, std::size_t dimension) {
    if (dimension == 0) {
        dimension = max_feature_index(records);
    }
    std::vector<LabeledRow> rows;
    rows.reserve(records.size());
    for (const auto &rec : records) {
        LabeledRow row{Vector(dimension, 0.0), rec.label};
        for (const auto &[index, value] : rec.entries) {
            // features beyond the training dimension cannot influence a trained model
            if (index <= dimension) {
                row.features[index - 1] = value;
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Dataset to_dataset(std::span<const SvmLightRecord> records, std::size_t dimension) {
    const auto rows = densify(records, dimension);
    return build_dataset(rows);
}

ScalingMode parse_scaling_mode(const std::string &name) {
    if (name == "none") return ScalingMode::none;
    if (name == "minmax") return ScalingMode::minmax_per_feature;
    if (name == "unit-l2") return ScalingMode::unit_l2_per_sample;
    throw error{errc::invalid_parameter, "unknown scaling '" + name + "' (expected none, minmax or unit-l2)"};
}

ScalingSpec ScalingSpec::learn(std::span<const LabeledRow> train, ScalingMode mode) {
    ScalingSpec spec;
    spec.mode = mode;
    if (mode != ScalingMode::minmax_per_feature || train.empty()) {
        return spec;
    }
    const std::size_t p = train.front().features.size();
    spec.mins.assign(p, std::numeric_limits<double>::infinity());
    spec.maxs.assign(p, -std::numeric_limits<double>::infinity());
    for (const auto &row : train) {
        for (std::size_t j = 0; j < p; ++j) {
            spec.mins[j] = std::min(spec.mins[j], row.features[j]);
            spec.maxs[j] = std::max(spec.maxs[j], row.features[j]);
        }
    }
    return spec;
}

void ScalingSpec::apply(std::vector<LabeledRow> &rows) const {
    switch (mode) {
        case ScalingMode::none: return;
        case ScalingMode::unit_l2_per_sample:
            for (auto &row : rows) {
                const double n = norm(row.features);
                if (n > 0.0) {
                    for (auto &v : row.features) {
                        v /= n;
                    }
                }
            }
            return;
        case ScalingMode::minmax_per_feature:
            for (auto &row : rows) {
                if (row.features.size() != mins.size()) {
                    throw error{errc::dimension_mismatch, "scaling was learned on " + std::to_string(mins.size()) +
                                                              " features, row has " + std::to_string(row.features.size())};
                }
                for (std::size_t j = 0; j < mins.size(); ++j) {
                    const double range = maxs[j] - mins[j];
                    // constant training features are left untouched
                    if (range > 0.0) {
                        row.features[j] = (row.features[j] - mins[j]) / range;
                    }
                }
            }
            return;
    }
}

SplitResult split(std::span<const SvmLightRecord> records, double train_fraction, std::uint64_t seed) {
    const std::size_t n = records.size();
    if (n < 2) {
        throw error{errc::too_few_samples, "splitting needs at least 2 records, got " + std::to_string(n)};
    }
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw error{errc::invalid_parameter, "train fraction must lie in (0, 1)"};
    }
    const auto n_train = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(n))), 1, n - 1);

    std::array<std::vector<std::size_t>, 2> classes;  // [0] = +1, [1] = -1
    for (std::size_t i = 0; i < n; ++i) {
        classes[records[i].label > 0 ? 0 : 1].push_back(i);
    }

    std::mt19937_64 rng{seed};
    SplitResult out;
    std::vector<std::size_t> train_idx;
    std::vector<std::size_t> test_idx;

    if (classes[0].empty() || classes[1].empty()) {
        out.stratified = false;
        out.warning = "only one class present; falling back to an unstratified split";
        std::vector<std::size_t> all(n);
        std::iota(all.begin(), all.end(), 0);
        shuffle(all, rng);
        train_idx.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n_train));
        test_idx.assign(all.begin() + static_cast<std::ptrdiff_t>(n_train), all.end());
    } else {
        // proportional allocation with largest remainders
        std::array<std::size_t, 2> take{};
        std::array<double, 2> frac{};
        std::size_t assigned = 0;
        for (int c = 0; c < 2; ++c) {
            const double ideal = static_cast<double>(n_train) * static_cast<double>(classes[c].size()) / static_cast<double>(n);
            take[c] = static_cast<std::size_t>(std::floor(ideal));
            frac[c] = ideal - std::floor(ideal);
            assigned += take[c];
        }
        for (std::size_t r = assigned; r < n_train; ++r) {
            const int c = frac[0] >= frac[1] ? 0 : 1;
            ++take[c];
            frac[c] = -1.0;
        }
        // each class with two or more records lands on both sides
        std::array<std::size_t, 2> lo{};
        std::array<std::size_t, 2> hi{};
        for (int c = 0; c < 2; ++c) {
            const std::size_t nc = classes[c].size();
            lo[c] = nc >= 2 ? 1 : 0;
            hi[c] = nc >= 2 ? nc - 1 : nc;
            take[c] = std::clamp(take[c], lo[c], hi[c]);
        }
        while (take[0] + take[1] < n_train) {
            const int c = (take[0] < hi[0] && (take[1] >= hi[1] || classes[0].size() >= classes[1].size())) ? 0 : 1;
            if (take[c] >= hi[c]) break;
            ++take[c];
        }
        while (take[0] + take[1] > n_train) {
            const int c = (take[0] > lo[0] && (take[1] <= lo[1] || classes[0].size() >= classes[1].size())) ? 0 : 1;
            if (take[c] <= lo[c]) break;
            --take[c];
        }
        for (int c = 0; c < 2; ++c) {
            shuffle(classes[c], rng);
            train_idx.insert(train_idx.end(), classes[c].begin(), classes[c].begin() + static_cast<std::ptrdiff_t>(take[c]));
            test_idx.insert(test_idx.end(), classes[c].begin() + static_cast<std::ptrdiff_t>(take[c]), classes[c].end());
        }
    }
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(test_idx.begin(), test_idx.end());
    for (const auto i : train_idx) out.train.push_back(records[i]);
    for (const auto i : test_idx) out.test.push_back(records[i]);
    return out;
}

std::vector<SvmLightRecord> subsample(std::span<const SvmLightRecord> records, std::size_t count, std::uint64_t seed) {
    if (count > records.size()) {
        throw error{errc::too_few_samples, "requested " + std::to_string(count) + " records but only " +
                                               std::to_string(records.size()) + " are available"};
    }
    std::vector<std::size_t> idx(records.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::mt19937_64 rng{seed};
    shuffle(idx, rng);
    idx.resize(count);
    std::sort(idx.begin(), idx.end());
    std::vector<SvmLightRecord> out;
    out.reserve(count);
    for (const auto i : idx) out.push_back(records[i]);
    return out;
}

}  // namespace nesvm::io
