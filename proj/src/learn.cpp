#include "hetnetbid/learn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "hetnetbid/csv.hpp"
#include "hetnetbid/errors.hpp"
#include "hetnetbid/rng.hpp"

namespace hetnetbid::learn {
namespace {

constexpr std::size_t kDim = 4; // three standardized features plus the bias slot

double dot(const std::array<double, kDim>& a, const std::array<double, kDim>& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

Standardizer fit_standardizer(std::span<const Sample> samples) {
    Standardizer st;
    const double n = static_cast<double>(samples.size());
    for (int k = 0; k < 3; ++k) {
        double mean = 0.0;
        for (const Sample& s : samples)
            mean += s.x[k];
        mean /= n;
        double var = 0.0;
        for (const Sample& s : samples)
            var += (s.x[k] - mean) * (s.x[k] - mean);
        const double sd = std::sqrt(var / n);
        st.mean[k] = mean;
        st.scale[k] = sd > 0.0 ? sd : 1.0; // constant feature: center only
    }
    return st;
}

struct Objectives {
    double primal;
    double dual;
};

Objectives objectives(const std::vector<std::array<double, kDim>>& xs, const std::vector<int>& ys,
                      const std::array<double, kDim>& w, const std::vector<double>& alpha,
                      double C) {
    const double wnorm2 = dot(w, w);
    double hinge = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
        hinge += std::max(0.0, 1.0 - ys[i] * dot(w, xs[i]));
    const double asum = std::accumulate(alpha.begin(), alpha.end(), 0.0);
    return {0.5 * wnorm2 + C * hinge, asum - 0.5 * wnorm2};
}

} // namespace

std::vector<Sample> collect_samples(std::span<const std::pair<Bid, bool>> history) {
    std::vector<Sample> samples;
    samples.reserve(history.size());
    for (const auto& [bid, accepted] : history)
        samples.push_back({{bid.rate_mbps, bid.price, bid.bandwidth_mhz}, accepted ? +1 : -1});
    return samples;
}

SvmModel train_svm(std::span<const Sample> samples, const SvmConfig& config, TrainStats* stats) {
    if (!(config.C > 0.0) || !(config.tolerance > 0.0))
        throw error(errc::invalid_parameter, "train_svm: C and tolerance must be positive");

    bool has_pos = false, has_neg = false;
    for (const Sample& s : samples) {
        for (double v : s.x)
            if (!std::isfinite(v))
                throw error(errc::invalid_data, "train_svm: non-finite feature value");
        if (s.y == +1)
            has_pos = true;
        else if (s.y == -1)
            has_neg = true;
        else
            throw error(errc::invalid_data, "train_svm: labels must be +1 or -1");
    }
    if (!has_pos || !has_neg)
        throw error(errc::degenerate_data, "train_svm: need at least one sample of each class");

    const Standardizer st = fit_standardizer(samples);
    const std::size_t n = samples.size();
    std::vector<std::array<double, kDim>> xs(n);
    std::vector<int> ys(n);
    std::vector<double> qii(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto z = st.apply(samples[i].x);
        xs[i] = {z[0], z[1], z[2], 1.0};
        ys[i] = samples[i].y;
        qii[i] = dot(xs[i], xs[i]);
    }

    // Dual coordinate descent on
    //   max_a  sum(a) - 1/2 ||sum a_i y_i x_i||^2,  0 <= a_i <= C,
    // the bias handled through the constant fourth coordinate.
    std::vector<double> alpha(n, 0.0);
    std::array<double, kDim> w{0.0, 0.0, 0.0, 0.0};
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    auto engine = make_engine(mix_seed({config.seed, 0x73766dULL}));

    TrainStats local;
    TrainStats& ts = stats ? *stats : local;
    ts = TrainStats{};

    // The dual ascent is monotone in the dual but not in the primal, so the
    // incumbent (best-primal iterate so far) is what the solver reports and
    // returns; its objective trace is non-increasing by construction and
    // P(incumbent) - D(alpha) still certifies the optimality gap.
    std::array<double, kDim> best_w = w;
    double best_primal = std::numeric_limits<double>::infinity();

    const double C = config.C;
    int pass = 0;
    for (; pass < config.max_iterations; ++pass) {
        std::shuffle(order.begin(), order.end(), engine);
        for (std::size_t i : order) {
            const double g = ys[i] * dot(w, xs[i]) - 1.0;
            double pg = g;
            if (alpha[i] <= 0.0)
                pg = std::min(g, 0.0);
            else if (alpha[i] >= C)
                pg = std::max(g, 0.0);
            if (pg == 0.0)
                continue;
            const double next = std::clamp(alpha[i] - g / qii[i], 0.0, C);
            const double delta = (next - alpha[i]) * ys[i];
            alpha[i] = next;
            for (std::size_t k = 0; k < kDim; ++k)
                w[k] += delta * xs[i][k];
        }
        const auto [primal, dual] = objectives(xs, ys, w, alpha, C);
        if (primal < best_primal) {
            best_primal = primal;
            best_w = w;
        }
        ts.objective_trace.push_back(best_primal);
        ts.primal_objective = best_primal;
        ts.dual_objective = dual;
        ts.duality_gap = best_primal - dual;
        if (ts.duality_gap <= config.tolerance * std::max(1.0, std::abs(best_primal))) {
            ++pass;
            break;
        }
    }
    ts.outer_iterations = pass;

    SvmModel model;
    model.w = {best_w[0], best_w[1], best_w[2]};
    model.bias = best_w[3];
    model.standardizer = st;
    model.trained_with = config;
    return model;
}

Classification classify(const SvmModel& model, const std::array<double, 3>& x) {
    const double score = model.decision(x);
    return {score, score >= 0.0};
}

double training_accuracy(const SvmModel& model, std::span<const Sample> samples) {
    if (samples.empty())
        return 0.0;
    std::size_t correct = 0;
    for (const Sample& s : samples) {
        const bool accepted = classify(model, s.x).accepted;
        correct += (accepted == (s.y == +1)) ? 1 : 0;
    }
    return static_cast<double>(correct) / static_cast<double>(samples.size());
}

std::string model_to_text(const SvmModel& m) {
    std::string out = "hetnetbid-svm v1\n";
    out += "w " + format_double(m.w[0]) + " " + format_double(m.w[1]) + " " +
           format_double(m.w[2]) + "\n";
    out += "bias " + format_double(m.bias) + "\n";
    out += "mean " + format_double(m.standardizer.mean[0]) + " " +
           format_double(m.standardizer.mean[1]) + " " + format_double(m.standardizer.mean[2]) +
           "\n";
    out += "scale " + format_double(m.standardizer.scale[0]) + " " +
           format_double(m.standardizer.scale[1]) + " " + format_double(m.standardizer.scale[2]) +
           "\n";
    out += "trained_with C=" + format_double(m.trained_with.C) +
           " tolerance=" + format_double(m.trained_with.tolerance) +
           " max_iterations=" + std::to_string(m.trained_with.max_iterations) +
           " seed=" + std::to_string(m.trained_with.seed) + "\n";
    return out;
}

namespace {

double parse_value(std::istringstream& in, const char* field) {
    double v;
    if (!(in >> v))
        throw error(errc::invalid_data, std::string("model record: bad value for ") + field);
    return v;
}

} // namespace

SvmModel model_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "hetnetbid-svm v1")
        throw error(errc::invalid_data, "model record: unknown format header");

    SvmModel m;
    auto read_triple = [&](const char* tag, std::array<double, 3>& out) {
        std::string t;
        std::getline(in, line);
        std::istringstream ls(line);
        if (!(ls >> t) || t != tag)
            throw error(errc::invalid_data, std::string("model record: expected field ") + tag);
        for (int k = 0; k < 3; ++k)
            out[k] = parse_value(ls, tag);
    };
    read_triple("w", m.w);
    {
        std::getline(in, line);
        std::istringstream ls(line);
        std::string t;
        if (!(ls >> t) || t != "bias")
            throw error(errc::invalid_data, "model record: expected field bias");
        m.bias = parse_value(ls, "bias");
    }
    read_triple("mean", m.standardizer.mean);
    read_triple("scale", m.standardizer.scale);
    {
        std::getline(in, line);
        std::istringstream ls(line);
        std::string t;
        if (!(ls >> t) || t != "trained_with")
            throw error(errc::invalid_data, "model record: expected field trained_with");
        std::string kv;
        while (ls >> kv) {
            const auto pos = kv.find('=');
            if (pos == std::string::npos)
                throw error(errc::invalid_data, "model record: malformed trained_with entry");
            const std::string key = kv.substr(0, pos);
            const std::string value = kv.substr(pos + 1);
            try {
                if (key == "C")
                    m.trained_with.C = std::stod(value);
                else if (key == "tolerance")
                    m.trained_with.tolerance = std::stod(value);
                else if (key == "max_iterations")
                    m.trained_with.max_iterations = std::stoi(value);
                else if (key == "seed")
                    m.trained_with.seed = std::stoull(value);
            } catch (const std::exception&) {
                throw error(errc::invalid_data, "model record: malformed trained_with value");
            }
        }
    }
    for (double s : m.standardizer.scale)
        if (!(s > 0.0))
            throw error(errc::invalid_data, "model record: scale entries must be positive");
    return m;
}

void save_model(const SvmModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw error(errc::io, "save_model: cannot open " + path);
    out << model_to_text(model);
    if (!out)
        throw error(errc::io, "save_model: write failed for " + path);
}

SvmModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw error(errc::io, "load_model: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return model_from_text(buf.str());
}

} // namespace hetnetbid::learn
