#ifndef HETNETBID_LEARN_HPP
#define HETNETBID_LEARN_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hetnetbid/types.hpp"

namespace hetnetbid::learn {

/// One labeled bid: features (rate, price, bandwidth), label +1 accept /
/// -1 reject.
struct Sample {
    std::array<double, 3> x{}; // (b, r(b), BW)
    int y = 0;
};

/// Per-feature affine map fitted on the training set; scale is never zero.
struct Standardizer {
    std::array<double, 3> mean{0.0, 0.0, 0.0};
    std::array<double, 3> scale{1.0, 1.0, 1.0};

    std::array<double, 3> apply(const std::array<double, 3>& x) const {
        return {(x[0] - mean[0]) / scale[0], (x[1] - mean[1]) / scale[1],
                (x[2] - mean[2]) / scale[2]};
    }
};

struct SvmConfig {
    double C = 1.0;
    double tolerance = 1e-6; // relative duality-gap stopping threshold
    int max_iterations = 100000;
    std::uint64_t seed = 0;
};

/// Linear soft-margin classifier over standardized bid features.
struct SvmModel {
    std::array<double, 3> w{};
    double bias = 0.0;
    Standardizer standardizer;
    SvmConfig trained_with;

    /// Decision value f(x) = w . standardize(x) + bias on raw features.
    double decision(const std::array<double, 3>& x) const {
        const auto z = standardizer.apply(x);
        return w[0] * z[0] + w[1] * z[1] + w[2] * z[2] + bias;
    }
};

struct Classification {
    double score = 0.0;
    bool accepted = false; // score >= 0, boundary inclusive
};

/// Solver diagnostics; objective_trace holds the primal objective after
/// each outer pass.
struct TrainStats {
    int outer_iterations = 0;
    double primal_objective = 0.0;
    double dual_objective = 0.0;
    double duality_gap = 0.0;
    std::vector<double> objective_trace;
};

/// Maps offered bids and observed decisions to labeled samples.
std::vector<Sample> collect_samples(std::span<const std::pair<Bid, bool>> history);

/// Trains the soft-margin linear SVM: minimize 1/2 ||w||^2 + C * sum(hinge)
/// by dual coordinate descent with a duality-gap stopping certificate.
/// Features are standardized first and the standardizer stored in the
/// model. Deterministic for a fixed (samples, config).
/// Throws errc::degenerate_data when one class is missing and
/// errc::invalid_data on non-finite features.
SvmModel train_svm(std::span<const Sample> samples, const SvmConfig& config,
                   TrainStats* stats = nullptr);

Classification classify(const SvmModel& model, const std::array<double, 3>& x);

double training_accuracy(const SvmModel& model, std::span<const Sample> samples);

/// Text model record; field order documented in the README.
std::string model_to_text(const SvmModel& model);
SvmModel model_from_text(const std::string& text); // throws errc::invalid_data
void save_model(const SvmModel& model, const std::string& path);
SvmModel load_model(const std::string& path);

} // namespace hetnetbid::learn

#endif
