#include "famrep/lp.hpp"

#include <stdexcept>

namespace famrep::lp {

void FeasibilitySystem::validate() const {
    if (a.empty()) throw std::invalid_argument("feasibility system needs at least one row");
    if (b.size() != a.size()) throw std::invalid_argument("rhs length differs from row count");
    const auto n = a.front().size();
    if (n == 0) throw std::invalid_argument("feasibility system needs at least one column");
    for (const auto& row : a) {
        if (row.size() != n) throw std::invalid_argument("ragged constraint matrix");
    }
}

FeasibilitySystem FeasibilitySystem::augmented() const {
    FeasibilitySystem out{a, b, false};
    if (normalized) {
        out.a.emplace_back(cols(), Rational(1));
        out.b.emplace_back(1);
    }
    return out;
}

void normalize_certificate(std::vector<Rational>& v) {
    for (const auto& x : v) {
        if (x != 0) {
            const Rational scale = abs(x);
            for (auto& y : v) y /= scale;
            return;
        }
    }
}

namespace {

class Tableau {
public:
    explicit Tableau(const FeasibilitySystem& sys)
        : m_(sys.rows()), n_(sys.cols()), rows_(m_, std::vector<Rational>(n_ + m_, Rational(0))),
          rhs_(m_), cost_(n_ + m_, Rational(0)), sign_(m_, 1), basis_(m_) {
        for (std::size_t i = 0; i < m_; ++i) {
            sign_[i] = sys.b[i] < 0 ? -1 : 1;
            for (std::size_t j = 0; j < n_; ++j) rows_[i][j] = sign_[i] * sys.a[i][j];
            rhs_[i] = sign_[i] * sys.b[i];
            rows_[i][n_ + i] = 1;
            basis_[i] = n_ + i;
        }
        // Reduced costs of the phase-one objective Σ artificials.
        for (std::size_t j = 0; j < n_; ++j) {
            for (std::size_t i = 0; i < m_; ++i) cost_[j] -= rows_[i][j];
        }
    }

    void run_phase_one() {
        for (;;) {
            std::size_t entering = n_;
            for (std::size_t j = 0; j < n_; ++j) {
                if (cost_[j] < 0) {
                    entering = j;
                    break;
                }
            }
            if (entering == n_) return;

            std::size_t leaving = m_;
            Rational best_ratio;
            for (std::size_t i = 0; i < m_; ++i) {
                if (rows_[i][entering] <= 0) continue;
                Rational ratio = rhs_[i] / rows_[i][entering];
                if (leaving == m_ || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[i] < basis_[leaving])) {
                    leaving = i;
                    best_ratio = std::move(ratio);
                }
            }
            if (leaving == m_) throw std::logic_error("phase-one objective unbounded");
            pivot(leaving, entering);
        }
    }

    Rational artificial_level() const {
        Rational z(0);
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] >= n_) z += rhs_[i];
        }
        return z;
    }

    void evict_artificials() {
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < n_) continue;
            for (std::size_t j = 0; j < n_; ++j) {
                if (rows_[i][j] != 0) {
                    pivot(i, j);
                    break;
                }
            }
        }
    }

    std::vector<Rational> primal() const {
        std::vector<Rational> mu(n_, Rational(0));
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < n_) mu[basis_[i]] = rhs_[i];
        }
        return mu;
    }

    /// Phase-one duals mapped back to the unflipped rows and negated, which
    /// yields yᵀA >= 0 and yᵀb < 0 when the artificial level is positive.
    std::vector<Rational> farkas() const {
        std::vector<Rational> y(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            const Rational dual = 1 - cost_[n_ + i];
            y[i] = -dual * sign_[i];
        }
        return y;
    }

    std::size_t pivots() const { return pivots_; }

private:
    void pivot(std::size_t r, std::size_t e) {
        ++pivots_;
        const Rational p = rows_[r][e];
        for (auto& x : rows_[r]) x /= p;
        rhs_[r] /= p;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r || rows_[i][e] == 0) continue;
            const Rational f = rows_[i][e];
            for (std::size_t j = 0; j < n_ + m_; ++j) rows_[i][j] -= f * rows_[r][j];
            rhs_[i] -= f * rhs_[r];
        }
        if (cost_[e] != 0) {
            const Rational f = cost_[e];
            for (std::size_t j = 0; j < n_ + m_; ++j) cost_[j] -= f * rows_[r][j];
        }
        basis_[r] = e;
    }

    std::size_t m_;
    std::size_t n_;
    std::vector<std::vector<Rational>> rows_;
    std::vector<Rational> rhs_;
    std::vector<Rational> cost_;
    std::vector<int> sign_;
    std::vector<std::size_t> basis_;
    std::size_t pivots_ = 0;
};

}  // namespace

FeasibilityOutcome solve_feasibility(const FeasibilitySystem& sys) {
    sys.validate();
    const auto aug = sys.augmented();
    Tableau t(aug);
    t.run_phase_one();

    FeasibilityOutcome out;
    if (t.artificial_level() > 0) {
        auto y = t.farkas();
        normalize_certificate(y);
        out.result = Infeasible{std::move(y)};
    } else {
        t.evict_artificials();
        out.result = Feasible{t.primal()};
    }
    out.pivots = t.pivots();
    if (!verify(sys, out)) throw std::logic_error("simplex produced a witness that does not verify");
    return out;
}

bool verify(const FeasibilitySystem& sys, const FeasibilityOutcome& outcome) {
    const auto aug = sys.augmented();
    const auto m = aug.rows();
    const auto n = aug.cols();
    if (outcome.feasible()) {
        const auto& mu = outcome.mu();
        if (mu.size() != n) return false;
        for (const auto& x : mu) {
            if (x < 0) return false;
        }
        for (std::size_t i = 0; i < m; ++i) {
            Rational s(0);
            for (std::size_t j = 0; j < n; ++j) s += aug.a[i][j] * mu[j];
            if (s != aug.b[i]) return false;
        }
        return true;
    }
    const auto& y = outcome.certificate();
    if (y.size() != m) return false;
    for (std::size_t j = 0; j < n; ++j) {
        Rational s(0);
        for (std::size_t i = 0; i < m; ++i) s += y[i] * aug.a[i][j];
        if (s < 0) return false;
    }
    Rational yb(0);
    for (std::size_t i = 0; i < m; ++i) yb += y[i] * aug.b[i];
    return yb < 0;
}

}  // namespace famrep::lp
