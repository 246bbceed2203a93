#include "qsense/branch_sim.hpp"

#include <algorithm>
#include <cmath>

namespace qsense {

namespace {

/// Compensated sum; keeps normalization checks tight for states with many
/// branches.
class KahanSum {
public:
    void add(double value) {
        const double y = value - compensation_;
        const double t = sum_ + y;
        compensation_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

bool eigen_less(const Vector& x, const Vector& y) {
    return std::lexicographical_compare(x.data(), x.data() + x.size(), y.data(),
                                        y.data() + y.size());
}

bool eigen_equal(const Vector& x, const Vector& y) {
    return (x - y).squaredNorm() == 0.0;
}

double norm_squared_of(const std::vector<Branch>& branches) {
    KahanSum sum;
    for (const Branch& branch : branches) {
        sum.add(std::norm(branch.amplitude));
    }
    return sum.value();
}

std::vector<Branch> rescaled(std::vector<Branch> branches, double factor) {
    for (Branch& branch : branches) {
        branch.amplitude *= factor;
    }
    return branches;
}

}  // namespace

BranchState BranchState::from_branches(std::vector<Branch> branches, double norm_tol) {
    if (branches.empty()) {
        throw NotNormalized("a branch state needs at least one branch");
    }
    const auto dimension = branches.front().eigenvalues.size();
    if (dimension < 1) {
        throw DimensionMismatch("branch eigenvalue vectors must be nonempty");
    }
    for (const Branch& branch : branches) {
        if (branch.eigenvalues.size() != dimension) {
            throw DimensionMismatch("branch eigenvalue vectors must share one length");
        }
        if (!branch.eigenvalues.allFinite() || !std::isfinite(std::norm(branch.amplitude))) {
            throw Error("branch data must be finite");
        }
    }
    std::sort(branches.begin(), branches.end(), [](const Branch& x, const Branch& y) {
        return eigen_less(x.eigenvalues, y.eigenvalues);
    });
    std::vector<Branch> merged;
    merged.reserve(branches.size());
    for (Branch& branch : branches) {
        if (!merged.empty() && eigen_equal(merged.back().eigenvalues, branch.eigenvalues)) {
            merged.back().amplitude += branch.amplitude;
        } else {
            merged.push_back(std::move(branch));
        }
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(),
                                [](const Branch& b) { return std::abs(b.amplitude) == 0.0; }),
                 merged.end());
    const double total = norm_squared_of(merged);
    if (std::abs(total - 1.0) > norm_tol) {
        throw NotNormalized("branch amplitudes are not normalized");
    }
    BranchState state;
    state.branches_ = std::move(merged);
    return state;
}

int BranchState::site_count() const {
    return branches_.empty() ? 0 : static_cast<int>(branches_.front().eigenvalues.size());
}

double BranchState::norm_squared() const {
    return norm_squared_of(branches_);
}

double BlockDecomposition::total_weight() const {
    KahanSum sum;
    for (const Block& block : blocks) {
        sum.add(block.weight);
    }
    return sum.value();
}

double BlockDecomposition::purity() const {
    KahanSum sum;
    for (const Block& block : blocks) {
        sum.add(block.weight * block.weight);
    }
    return sum.value();
}

BranchState probe_state(const ProbePair& pair) {
    if (pair.s.size() != pair.r.size()) {
        throw DimensionMismatch("probe vectors must share one length");
    }
    if (eigen_equal(pair.s, pair.r)) {
        return BranchState::from_branches({Branch{Complex(1.0, 0.0), pair.s}});
    }
    const double amp = 1.0 / std::sqrt(2.0);
    return BranchState::from_branches(
        {Branch{Complex(amp, 0.0), pair.s}, Branch{Complex(amp, 0.0), pair.r}});
}

BranchState product_state(const std::vector<SiteAmplitude>& sites) {
    const int dimension = static_cast<int>(sites.size());
    if (dimension < 1) {
        throw Error("product state needs at least one site");
    }
    if (dimension > 20) {
        throw TooLarge("product state expansion is capped at 20 sites");
    }
    for (const SiteAmplitude& site : sites) {
        if (std::abs(std::norm(site.a) + std::norm(site.b) - 1.0) > 1e-9) {
            throw NotNormalized("per-site amplitudes must be normalized");
        }
        if (site.high == site.low) {
            throw Error("per-site eigenvalues must differ");
        }
        if (!std::isfinite(site.high) || !std::isfinite(site.low)) {
            throw Error("per-site eigenvalues must be finite");
        }
    }
    const std::size_t count = std::size_t{1} << dimension;
    std::vector<Branch> branches;
    branches.reserve(count);
    for (std::size_t mask = 0; mask < count; ++mask) {
        Complex amplitude(1.0, 0.0);
        Vector eigenvalues(dimension);
        for (int j = 0; j < dimension; ++j) {
            const SiteAmplitude& site = sites[static_cast<std::size_t>(j)];
            if (mask >> j & 1U) {
                amplitude *= site.a;
                eigenvalues[j] = site.high;
            } else {
                amplitude *= site.b;
                eigenvalues[j] = site.low;
            }
        }
        branches.push_back(Branch{amplitude, std::move(eigenvalues)});
    }
    // Per-site tolerances compound across sites; rescale exactly before the
    // strict construction check.
    const double total = norm_squared_of(branches);
    return BranchState::from_branches(rescaled(std::move(branches), 1.0 / std::sqrt(total)));
}

BranchState evolve(const BranchState& state, const EvolutionParams& params,
                   const CoefficientMatrix& coefficients) {
    if (params.phases.size() != coefficients.function_count()) {
        throw DimensionMismatch("one phase per coefficient row is required");
    }
    if (coefficients.site_count() != state.site_count()) {
        throw DimensionMismatch("coefficient matrix width does not match the state");
    }
    if (!params.phases.allFinite()) {
        throw Error("phases must be finite");
    }
    std::vector<Branch> branches = state.branches();
    for (Branch& branch : branches) {
        const double phase = params.phases.dot(coefficients.values * branch.eigenvalues);
        branch.amplitude *= Complex(std::cos(phase), std::sin(phase));
    }
    const double total = norm_squared_of(branches);
    return BranchState::from_branches(rescaled(std::move(branches), 1.0 / std::sqrt(total)));
}

BlockDecomposition twirl(const BranchState& state, const CoefficientMatrix& coefficients,
                         const std::vector<int>& noise_indices, double tol) {
    if (!(tol > 0.0)) {
        throw Error("twirl grouping tolerance must be positive");
    }
    if (coefficients.site_count() != state.site_count()) {
        throw DimensionMismatch("coefficient matrix width does not match the state");
    }
    for (int k : noise_indices) {
        if (k < 0 || k >= coefficients.function_count()) {
            throw Error("noise index out of range");
        }
    }

    const int tuple_size = static_cast<int>(noise_indices.size());
    struct Group {
        Vector tuple;
        std::vector<Branch> members;
    };
    std::vector<Group> groups;
    for (const Branch& branch : state.branches()) {
        Vector tuple(tuple_size);
        for (int i = 0; i < tuple_size; ++i) {
            tuple[i] = coefficients.row(noise_indices[static_cast<std::size_t>(i)])
                           .dot(branch.eigenvalues);
        }
        Group* home = nullptr;
        for (Group& group : groups) {
            if (((group.tuple - tuple).cwiseAbs().array() <= tol).all()) {
                home = &group;
                break;
            }
        }
        if (home == nullptr) {
            groups.push_back(Group{tuple, {}});
            home = &groups.back();
        }
        home->members.push_back(branch);
    }
    std::sort(groups.begin(), groups.end(),
              [](const Group& x, const Group& y) { return eigen_less(x.tuple, y.tuple); });

    BlockDecomposition decomposition;
    decomposition.blocks.reserve(groups.size());
    for (Group& group : groups) {
        Block block;
        block.noise_eigenvalues = group.tuple;
        block.weight = norm_squared_of(group.members);
        block.state = BranchState::from_branches(
            rescaled(std::move(group.members), 1.0 / std::sqrt(block.weight)));
        decomposition.blocks.push_back(std::move(block));
    }
    return decomposition;
}

BranchState reassemble(const BlockDecomposition& decomposition) {
    std::vector<Branch> branches;
    for (const Block& block : decomposition.blocks) {
        const double scale = std::sqrt(block.weight);
        for (const Branch& branch : block.state.branches()) {
            branches.push_back(Branch{scale * branch.amplitude, branch.eigenvalues});
        }
    }
    const double total = norm_squared_of(branches);
    return BranchState::from_branches(rescaled(std::move(branches), 1.0 / std::sqrt(total)));
}

double qfi_pure(const BranchState& state, const Vector& generator_weights) {
    if (generator_weights.size() != state.site_count()) {
        throw DimensionMismatch("generator weights do not match the state");
    }
    KahanSum mean_sum;
    for (const Branch& branch : state.branches()) {
        mean_sum.add(std::norm(branch.amplitude) * generator_weights.dot(branch.eigenvalues));
    }
    const double mean = mean_sum.value();
    KahanSum var_sum;
    for (const Branch& branch : state.branches()) {
        const double centered = generator_weights.dot(branch.eigenvalues) - mean;
        var_sum.add(std::norm(branch.amplitude) * centered * centered);
    }
    return 4.0 * var_sum.value();
}

double qfi_mixed(const BlockDecomposition& decomposition, const Vector& generator_weights) {
    KahanSum sum;
    for (const Block& block : decomposition.blocks) {
        sum.add(block.weight * qfi_pure(block.state, generator_weights));
    }
    return sum.value();
}

double parity_fisher(const ProbePair& pair, const CoefficientMatrix& coefficients,
                     int signal_index, double phase) {
    if (signal_index < 0 || signal_index >= coefficients.function_count()) {
        throw Error("signal index out of range");
    }
    if (!std::isfinite(phase)) {
        throw Error("phase must be finite");
    }
    if (pair.s.size() != pair.r.size() || pair.s.size() != coefficients.site_count()) {
        throw DimensionMismatch("probe vectors do not match the coefficient matrix");
    }
    if (eigen_equal(pair.s, pair.r)) {
        throw NotTwoBranch("parity readout needs two distinct branches");
    }
    // Two-outcome fringe p(+-) = (1 +- cos(gap*phase))/2. Its Fisher
    // information is gap^2 sin^2 / (1 - cos^2) = gap^2 wherever sin != 0 and
    // extends by continuity to gap^2 at the extrema, independent of `phase`.
    const double gap = coefficients.row(signal_index).dot(pair.s - pair.r);
    return gap * gap;
}

}  // namespace qsense
