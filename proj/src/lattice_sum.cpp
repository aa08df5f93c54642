#include "subwave/lattice_sum.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace subwave {

namespace {

constexpr double euler_gamma = 0.57721566490153286061;

// B_0..B_n with B_1 = -1/2.
const std::vector<double>& bernoulli_numbers() {
    static const std::vector<double> table = [] {
        constexpr int N = 80;
        std::vector<double> B(N + 1, 0.0);
        B[0] = 1.0;
        for (int n = 1; n <= N; ++n) {
            double s = 0.0, binom = 1.0; // C(n+1, k)
            for (int k = 0; k < n; ++k) {
                s += binom * B[k];
                binom *= double(n + 1 - k) / double(k + 1);
            }
            B[n] = -s / (n + 1);
        }
        return B;
    }();
    return table;
}

// Sequence accelerator: Levin u-type via the Weniger recurrence.
class LevinU {
public:
    explicit LevinU(double beta = 1.0) : beta_(beta) {}

    cplx next(cplx partial_sum, cplx omega) {
        numer_.push_back(partial_sum / omega);
        denom_.push_back(1.0 / omega);
        const int N = n_++;
        if (N > 0) {
            double p = 1.0 / (beta_ + N - 1);
            const double r = (beta_ + N - 1) / (beta_ + N);
            for (int j = 1; j <= N; ++j) {
                const double fact = (beta_ + N - j) * p;
                numer_[N - j] = numer_[N - j + 1] - fact * numer_[N - j];
                denom_[N - j] = denom_[N - j + 1] - fact * denom_[N - j];
                p *= r;
            }
        }
        degenerate_ = std::abs(denom_[0]) < 1e-300;
        if (!degenerate_) last_ = numer_[0] / denom_[0];
        return last_;
    }

    bool degenerate() const { return degenerate_; }

private:
    double beta_;
    int n_ = 0;
    bool degenerate_ = false;
    cplx last_{};
    std::vector<cplx> numer_, denom_;
};

// Iterated Aitken delta^2 on a list of partial sums.
cplx iterated_aitken(std::vector<cplx> s) {
    while (s.size() >= 3) {
        std::vector<cplx> t;
        t.reserve(s.size() - 2);
        for (std::size_t i = 0; i + 2 < s.size(); ++i) {
            const cplx d1 = s[i + 1] - s[i];
            const cplx d2 = s[i + 2] - 2.0 * s[i + 1] + s[i];
            t.push_back(std::abs(d2) < 1e-300 ? s[i + 2]
                                              : s[i + 2] - (s[i + 2] - s[i + 1]) * (s[i + 2] - s[i + 1]) / d2);
        }
        s = std::move(t);
    }
    return s.back();
}

// theta reduced to (-pi, pi].
double reduce_angle(double theta) {
    double t = std::remainder(theta, 2.0 * pi);
    if (t <= -pi) t += 2.0 * pi;
    return t;
}

// Accelerated sum_{m>=1} term(m) where term(m) ~ e^{i theta m} * (smooth
// decaying). Consecutive half-periods of the phase are grouped into blocks so
// the block sums alternate; Levin-u extrapolates the block partial sums.
template <class Term>
SumResult blocked_tail(Term term, double theta, double tol, int term_budget) {
    const int block = std::max(1, int(std::lround(pi / std::max(1e-12, std::abs(theta)))));
    LevinU levin;
    std::vector<cplx> partials;
    cplx s{};
    cplx val{}, prev{};
    double lasteps = 0.0;
    int consumed = 0, hits = 0;
    bool have_prev = false, degenerate = false;
    for (int j = 0; consumed < term_budget; ++j) {
        cplx b{};
        for (int i = 0; i < block && consumed < term_budget; ++i)
            b += term(++consumed);
        s += b;
        partials.push_back(s);
        val = levin.next(s, (1.0 + j) * (std::abs(b) < 1e-300 ? cplx(1e-300) : b));
        degenerate = degenerate || levin.degenerate();
        if (have_prev) {
            lasteps = std::abs(val - prev);
            if (lasteps <= tol * std::max(1.0, std::abs(val))) {
                if (++hits >= 2) return {val, lasteps, consumed};
            } else {
                hits = 0;
            }
        }
        prev = val;
        have_prev = true;
    }
    if (degenerate && partials.size() >= 3) {
        const cplx a = iterated_aitken(partials);
        return {a, std::abs(a - val), consumed};
    }
    throw Error(ErrorCode::NoConvergence,
                "lattice tail not converged within " + std::to_string(term_budget) +
                    " terms (theta=" + std::to_string(theta) + ")");
}

// Phi via the Bernoulli expansion of the singular part, |theta| < ~2:
//   Phi(e^mu,1,a) = e^{-mu a} [ -ln(-mu) - psi(a) - gamma
//                               - sum_{n>=1} B_n(a) mu^n/(n n!) ].
SumResult lerch_small_angle(double theta, double a, double tol) {
    const auto& B = bernoulli_numbers();
    const int N = int(B.size()) - 1;
    // B_n(a) by the binomial convolution.
    std::vector<double> Bn(N + 1);
    std::vector<double> apow(N + 1, 1.0);
    for (int k = 1; k <= N; ++k) apow[k] = apow[k - 1] * a;
    for (int n = 0; n <= N; ++n) {
        double s = 0.0, binom = 1.0;
        for (int k = 0; k <= n; ++k) {
            s += binom * B[k] * apow[n - k];
            binom *= double(n - k) / double(k + 1);
        }
        Bn[n] = s;
    }
    const cplx mu(0.0, theta);
    cplx sum{};
    cplx mupow = mu;
    double fact = 1.0;
    int used = 0, small_run = 0;
    for (int n = 1; n <= N; ++n) {
        fact *= n;
        const cplx t = Bn[n] * mupow / (n * fact);
        sum += t;
        mupow *= mu;
        used = n;
        small_run = (std::abs(t) < 0.25 * tol * std::max(1.0, std::abs(sum))) ? small_run + 1 : 0;
        if (small_run >= 3 && n > 6) break;
    }
    const cplx val = std::exp(-mu * a) *
                     (-std::log(-mu) - digamma(a) - euler_gamma - sum);
    return {val, tol * std::max(1.0, std::abs(val)), used};
}

} // namespace

double digamma(double x) {
    if (!(x > 0.0))
        throw Error(ErrorCode::BadInput, "digamma needs x > 0");
    const auto& B = bernoulli_numbers();
    double acc = 0.0;
    while (x < 8.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x, inv2 = inv * inv;
    double s = std::log(x) - 0.5 * inv, c = inv2;
    for (int k = 1; k <= 7; ++k) {
        s -= B[2 * k] / (2 * k) * c;
        c *= inv2;
    }
    return acc + s;
}

SumResult lerch_phi(double theta, double a, double tol, int term_budget) {
    if (!(a > 0.0))
        throw Error(ErrorCode::BadInput, "lerch_phi needs a > 0");
    const double th = reduce_angle(theta);
    if (std::abs(th) < 1e-13)
        throw Error(ErrorCode::OnSingularPoint, "lerch_phi diverges at theta = 0");
    if (std::abs(th) < 1.0)
        return lerch_small_angle(th, a, tol);
    // log split: Phi = -Log(1-z) + 1/a - a sum_{k>=1} z^k/(k(k+a))
    const cplx z = std::polar(1.0, th);
    auto rem = blocked_tail([&, zp = cplx(1.0)](int k) mutable {
        zp *= z;
        return zp / (double(k) * (k + a));
    }, th, tol, term_budget);
    const cplx val = -std::log(1.0 - z) + 1.0 / a - a * rem.value;
    return {val, a * rem.est_error + tol * std::max(1.0, std::abs(val)), rem.terms_used};
}

double translate_diag_sum(double alpha, const Lattice& lat) {
    const double th = reduce_angle(alpha * lat.period);
    if (std::abs(th) < 1e-13)
        throw Error(ErrorCode::OnSingularPoint, "translate sum diverges at alpha = 0");
    // 2 sum_{m>=1} cos(m th)/m = -2 ln(2|sin(th/2)|)
    return -2.0 / lat.period * std::log(2.0 * std::abs(std::sin(0.5 * th)));
}

SumResult axis_lattice_sum(double d, double alpha, const Lattice& lat,
                           double tol, int term_budget) {
    const double L = lat.period;
    if (std::abs(d) < 1e-12 * L || std::abs(d - L) < 1e-12 * L)
        throw Error(ErrorCode::OnSingularPoint,
                    "evaluation point coincides with a lattice point");
    if (!(d > 0.0) || !(d < L))
        throw Error(ErrorCode::BadInput, "axis sum needs 0 < d < period");
    const double th = reduce_angle(alpha * L);
    if (std::abs(th) < 1e-13)
        throw Error(ErrorCode::OnSingularPoint, "axis sum diverges at alpha = 0");
    const double a = d / L;
    const auto p1 = lerch_phi(-th, a, tol, term_budget);
    const auto p2 = lerch_phi(th, 1.0 - a, tol, term_budget);
    const cplx val = (p1.value + std::polar(1.0, th) * p2.value) / L;
    return {val, (p1.est_error + p2.est_error) / L, p1.terms_used + p2.terms_used};
}

double axis_tail_bound(int M, double alpha, const Lattice& lat) {
    const double th = reduce_angle(alpha * lat.period);
    return 2.0 / (double(M) * (1.0 - std::abs(std::cos(0.5 * th))));
}

SumResult greens_alpha(const Vec3& x, double alpha, const Lattice& lat,
                       double tol, int term_budget) {
    const double L = lat.period;
    const double th = reduce_angle(alpha * L);
    if (std::abs(th) < 1e-13)
        throw Error(ErrorCode::OnSingularPoint, "greens_alpha diverges at alpha = 0");
    const double x1 = x[0] / L;
    const double rho2 = (x[1] * x[1] + x[2] * x[2]) / (L * L);
    const double nearest = std::abs(x1 - std::round(x1));
    if (rho2 < 1e-28 && nearest < 1e-12)
        throw Error(ErrorCode::OnSingularPoint, "source point on the lattice");

    if (rho2 < 1e-28) {
        // on-axis: shift into (0,1) and use the Lerch pair
        const double n0 = std::floor(x1);
        const double d = x1 - n0; // in (0,1)
        const auto A = axis_lattice_sum(d * L, alpha, lat, tol, term_budget);
        const cplx val = -std::polar(1.0, th * n0) / (4.0 * pi) * A.value;
        return {val, A.est_error / (4.0 * pi), A.terms_used};
    }

    auto r = [&](double m) { return std::sqrt((x1 - m) * (x1 - m) + rho2); };
    const cplx z = std::polar(1.0, th);
    const auto plus = blocked_tail([&, zp = cplx(1.0)](int m) mutable {
        zp *= z;
        return zp / r(m);
    }, th, tol, term_budget / 2);
    const auto minus = blocked_tail([&, zp = cplx(1.0)](int m) mutable {
        zp *= std::conj(z);
        return zp / r(-m);
    }, th, tol, term_budget / 2);
    const cplx val = -(1.0 / r(0.0) + plus.value + minus.value) / (4.0 * pi * L);
    return {val, (plus.est_error + minus.est_error) / (4.0 * pi * L),
            plus.terms_used + minus.terms_used + 1};
}

} // namespace subwave
