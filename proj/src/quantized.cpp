#include "ifd/quantized.hpp"

#include <cmath>
#include <numbers>

#include "ifd/errors.hpp"

namespace ifd {

namespace {

void check_dims(const std::vector<int>& dims) {
    if (dims.empty()) throw DomainError("composite state needs at least one field mode");
    for (int d : dims) {
        if (d < 2) throw DomainError("field mode dimension must be at least 2");
    }
}

}  // namespace

void FieldCoupling::validate() const {
    if (!(g >= 0.0) || !(t_b >= 0.0)) throw DomainError("coupling needs g >= 0 and t_B >= 0");
}

CompositeState::CompositeState(std::vector<int> mode_dims, std::vector<bool> two_level)
    : dims_(std::move(mode_dims)), two_level_(std::move(two_level)) {
    check_dims(dims_);
    if (two_level_.empty()) two_level_.assign(dims_.size(), false);
    if (two_level_.size() != dims_.size()) throw DomainError("two_level flags must match the mode count");
    for (std::size_t k = 0; k < dims_.size(); ++k) {
        if (two_level_[k] && dims_[k] != 2) throw DomainError("a two-level mode has dimension 2");
    }
    std::size_t total = 3;
    for (int d : dims_) total *= static_cast<std::size_t>(d);
    amps_.assign(total, Complex(0.0, 0.0));
}

CompositeState CompositeState::product(const std::vector<int>& mode_dims, const std::vector<int>& occupations,
                                       const PureState& qutrit) {
    CompositeState s(mode_dims);
    for (int l = 0; l < 3; ++l) s.amps_[s.index(occupations, l)] = qutrit[l];
    return s;
}

std::size_t CompositeState::index(const std::vector<int>& occupations, int level) const {
    if (occupations.size() != dims_.size()) throw DomainError("occupation count does not match the modes");
    if (level < 0 || level > 2) throw DomainError("qutrit level must be 0, 1 or 2");
    std::size_t idx = 0;
    for (std::size_t k = 0; k < dims_.size(); ++k) {
        if (occupations[k] < 0 || occupations[k] >= dims_[k]) throw DomainError("occupation outside truncation");
        idx = idx * static_cast<std::size_t>(dims_[k]) + static_cast<std::size_t>(occupations[k]);
    }
    return idx * 3 + static_cast<std::size_t>(level);
}

std::vector<int> CompositeState::occupations(std::size_t index) const {
    std::vector<int> occ(dims_.size());
    std::size_t rest = index / 3;
    for (std::size_t k = dims_.size(); k-- > 0;) {
        occ[k] = static_cast<int>(rest % static_cast<std::size_t>(dims_[k]));
        rest /= static_cast<std::size_t>(dims_[k]);
    }
    return occ;
}

Complex CompositeState::amplitude(const std::vector<int>& occupations, int level) const {
    return amps_[index(occupations, level)];
}

double CompositeState::norm() const {
    double sum = 0.0;
    for (const auto& a : amps_) sum += std::norm(a);
    return std::sqrt(sum);
}

double CompositeState::truncation_leakage() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        const auto occ = occupations(i);
        for (std::size_t k = 0; k < dims_.size(); ++k) {
            if (!two_level_[k] && occ[k] == dims_[k] - 1) worst = std::max(worst, std::abs(amps_[i]));
        }
    }
    return worst;
}

std::array<double, 3> CompositeState::qutrit_marginals() const {
    std::array<double, 3> p{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < amps_.size(); ++i) p[static_cast<std::size_t>(level(i))] += std::norm(amps_[i]);
    return p;
}

int CompositeState::excitations(std::size_t index) const {
    int total = level(index) == 2 ? 1 : 0;
    for (int n : occupations(index)) total += n;
    return total;
}

Eigen::MatrixXcd jc_hamiltonian(double g, int n_max) {
    if (n_max < 1) throw DomainError("jc_hamiltonian needs n_max >= 1");
    const CompositeState layout({n_max + 1});
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(layout.size()),
                                                static_cast<Eigen::Index>(layout.size()));
    for (int n = 1; n <= n_max; ++n) {
        const auto up = static_cast<Eigen::Index>(layout.index({n}, 1));
        const auto down = static_cast<Eigen::Index>(layout.index({n - 1}, 2));
        // <n,1| b^dagger |1><2| |n-1,2> = sqrt(n)
        h(up, down) = kI * g * std::sqrt(static_cast<double>(n)) / 2.0;
        h(down, up) = std::conj(h(up, down));
    }
    return h;
}

double theta_n(double g, int n, double t_b) {
    if (n < 0) throw DomainError("photon number must be non-negative");
    return g * std::sqrt(static_cast<double>(n)) * t_b;
}

void apply_splitter(CompositeState& s, int n_segments) {
    const Operator3 u = beam_splitter(n_segments);
    for (std::size_t base = 0; base < s.size(); base += 3) {
        const Vector3c v(s[base], s[base + 1], s[base + 2]);
        const Vector3c w = u * v;
        for (int l = 0; l < 3; ++l) s[base + static_cast<std::size_t>(l)] = w(l);
    }
}

void apply_coupling(CompositeState& s, int mode, const FieldCoupling& c) {
    c.validate();
    const auto& dims = s.mode_dims();
    if (mode < 0 || mode >= static_cast<int>(dims.size())) throw DomainError("mode index out of range");
    const auto k = static_cast<std::size_t>(mode);
    for (std::size_t i = 0; i < s.size(); i += 3) {
        auto occ = s.occupations(i);
        const int n = occ[k];
        if (n == 0) continue;
        const std::size_t up = i + 1;  // |..n..> |1>
        occ[k] = n - 1;
        const std::size_t down = s.index(occ, 2);  // |..n-1..> |2>
        // In the (up, down) basis H = -(g sqrt(n) / 2) sigma^y, so
        // exp(-i H t) = [[c, s], [-s, c]].
        const double half = 0.5 * theta_n(c.g, n, c.t_b);
        const double co = std::cos(half);
        const double si = std::sin(half);
        const Complex a = s[up];
        const Complex b = s[down];
        s[up] = co * a + si * b;
        s[down] = -si * a + co * b;
    }
    if (s.truncation_leakage() > 1e-8) throw NumericError("field truncation too small: top Fock level populated");
}

CompositeState field_parity_gauge(const CompositeState& s) {
    CompositeState out = s;
    for (std::size_t i = 2; i < out.size(); i += 3) out[i] = -out[i];
    return out;
}

CompositeState run_single_mode(int n_segments, int n_photons, const std::vector<FieldCoupling>& couplings,
                               int n_max) {
    if (n_segments < 1) throw DomainError("protocol needs N >= 1");
    if (couplings.size() != static_cast<std::size_t>(n_segments)) {
        throw DomainError("one coupling per segment is required");
    }
    if (n_photons < 0 || n_photons >= n_max) throw DomainError("photon number must be below n_max");
    CompositeState s = CompositeState::product({n_max + 1}, {n_photons}, PureState::basis(0));
    apply_splitter(s, n_segments);
    for (const auto& c : couplings) {
        apply_coupling(s, 0, c);
        apply_splitter(s, n_segments);
    }
    return s;
}

CompositeState run_single_mode(int n_segments, int n_photons, const FieldCoupling& coupling, int n_max) {
    if (n_segments < 1) throw DomainError("protocol needs N >= 1");
    return run_single_mode(n_segments, n_photons, std::vector<FieldCoupling>(static_cast<std::size_t>(n_segments), coupling),
                           n_max);
}

CompositeState run_two_mode(int m, int n, double g1, double g2, double tb1, double tb2, int n_max) {
    if (m < 0 || n < 0 || m >= n_max || n >= n_max) throw DomainError("photon numbers must be below n_max");
    CompositeState s = CompositeState::product({n_max + 1, n_max + 1}, {m, n}, PureState::basis(0));
    apply_splitter(s, 2);
    apply_coupling(s, 1, {g1, tb1});
    apply_splitter(s, 2);
    apply_coupling(s, 0, {g2, tb2});
    apply_splitter(s, 2);
    return s;
}

CompositeState run_qubit_probe(int n_segments, Complex alpha, Complex beta, int target_initial, double theta) {
    if (n_segments < 1) throw DomainError("protocol needs N >= 1");
    if (target_initial != 0 && target_initial != 1) throw DomainError("target must start in |0> or |1>");
    if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-10) throw DomainError("|alpha|^2 + |beta|^2 must be 1");
    if (!(theta >= 0.0)) throw DomainError("probe strength must be non-negative");
    CompositeState s({2}, {true});
    s[s.index({0}, target_initial)] = alpha;
    s[s.index({1}, target_initial)] = beta;
    // One quantum: g t_B = theta.
    const FieldCoupling c{theta, 1.0};
    apply_splitter(s, n_segments);
    for (int j = 0; j < n_segments; ++j) {
        apply_coupling(s, 0, c);
        apply_splitter(s, n_segments);
    }
    return s;
}

}  // namespace ifd
