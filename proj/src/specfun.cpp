// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the linkmix authors

#include "linkmix/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "linkmix/log.hpp"

namespace linkmix::specfun {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kLn2Pi = 1.83787706640934548356065947281;  // ln(2*pi)
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Lanczos coefficients, g = 607/128, 15 terms (Godfrey). Relative accuracy of
// the resulting Gamma is ~1e-15 over Re z >= 1/2.
constexpr double kLanczosG = 607.0 / 128.0;
constexpr double kLanczos[15] = {
    0.99999999999999709182,     57.156235665862923517,     -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,   0.33994649984811888699e-4,
    0.46523628927048575665e-4,  -0.98374475304879564677e-4, 0.15808870322491248884e-3,
    -0.21026444172410488319e-3, 0.21743961811521264320e-3, -0.16431810653676389022e-3,
    0.84418223983852743293e-4,  -0.26190838401581408670e-4, 0.36899182659531622704e-5,
};

std::complex<double> lanczos_ln_gamma(std::complex<double> z) {
    // valid for Re z >= 0.5
    std::complex<double> sum = kLanczos[0];
    for (int k = 1; k < 15; ++k) sum += kLanczos[k] / (z - 1.0 + static_cast<double>(k));
    const std::complex<double> t = z + (kLanczosG - 0.5);
    return 0.5 * kLn2Pi + (z - 0.5) * std::log(t) - t + std::log(sum);
}

std::complex<double> clog1p(std::complex<double> w) {
    if (std::abs(w) < 1e-4) return w * (1.0 - w * (0.5 - w / 3.0));
    return std::log(1.0 + w);
}

// log sin(pi z), stable for large |Im z|; exp of the result equals sin(pi z).
std::complex<double> log_sin_pi(std::complex<double> z) {
    if (z.imag() >= 0.0) {
        // sin(pi z) = -e^{-i pi z} (1 - e^{2 i pi z}) / (2 i), |e^{2 i pi z}| <= 1
        const std::complex<double> i2pz(-2.0 * kPi * z.imag(), 2.0 * kPi * z.real());
        return std::complex<double>(0.0, -kPi) * z + clog1p(-std::exp(i2pz)) +
               std::log(std::complex<double>(0.0, 0.5));
    }
    return std::conj(log_sin_pi(std::conj(z)));
}

bool near_nonpositive_integer(double x, double tol) {
    if (x > 0.5) return false;
    return std::abs(x - std::round(x)) < tol;
}

}  // namespace

std::complex<double> ln_gamma(std::complex<double> z) {
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real())) {
        throw DomainError("ln_gamma: pole at non-positive integer " + std::to_string(z.real()));
    }
    if (z.real() >= 0.5) return lanczos_ln_gamma(z);
    // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
    return std::log(kPi) - log_sin_pi(z) - lanczos_ln_gamma(1.0 - z);
}

SignedLog lgamma_signed(double x) {
    if (x > 0.0) return {std::lgamma(x), 1};
    if (x == std::floor(x)) {
        throw DomainError("lgamma_signed: pole at non-positive integer " + std::to_string(x));
    }
    // sign(Gamma(x)) = (-1)^floor(x) for x < 0
    const double fl = std::floor(x);
    const int sign = (static_cast<long long>(fl) % 2 == 0) ? 1 : -1;
    return {std::lgamma(x), sign};
}

double gamma_lower_reg(double p, double x) { return 1.0 - gamma_upper_reg(p, x); }

double gamma_upper_reg(double p, double x) {
    if (!(p > 0.0)) throw DomainError("gamma_upper_reg: requires p > 0");
    if (!(x >= 0.0)) throw DomainError("gamma_upper_reg: requires x >= 0");
    if (x == 0.0) return 1.0;
    const double lgp = std::lgamma(p);
    const double lpre = p * std::log(x) - x - lgp;  // log of x^p e^-x / Gamma(p)
    if (x < p + 1.0) {
        // lower series: P = x^p e^-x / Gamma(p+1) * sum_k x^k / ((p+1)...(p+k))
        double term = 1.0, sum = 1.0, ap = p;
        for (int k = 0; k < 1000; ++k) {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if (term < sum * 1e-17) break;
        }
        const double P = std::exp(lpre) * sum / p;
        return 1.0 - std::min(1.0, P);
    }
    // continued fraction (modified Lentz) for Q
    const double tiny = 1e-300;
    double b = x + 1.0 - p, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i <= 1000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - p);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return std::min(1.0, std::exp(lpre) * h);
}

double bessel_i_ln(double v, double x) {
    if (!(v >= 0.0)) throw DomainError("bessel_i_ln: requires v >= 0");
    if (!(x >= 0.0)) throw DomainError("bessel_i_ln: requires x >= 0");
    if (x == 0.0) return v == 0.0 ? 0.0 : kNegInf;
    // series term k: (x/2)^{v+2k} / (k! Gamma(v+k+1)), all positive
    const double lh = std::log(0.5 * x);
    double max_lt = kNegInf;
    std::vector<double> lts;
    lts.reserve(64);
    double lt = v * lh - std::lgamma(v + 1.0);
    for (int k = 0; k < 20000; ++k) {
        lts.push_back(lt);
        max_lt = std::max(max_lt, lt);
        const double ratio = (0.25 * x * x) / ((k + 1.0) * (v + k + 1.0));
        const double lt_next = lt + std::log(ratio);
        // once decaying, a geometric majorant bounds the tail
        if (ratio < 1.0 && lt_next - max_lt < std::log(1e-18 * (1.0 - ratio))) {
            lt = lt_next;
            break;
        }
        lt = lt_next;
    }
    double sum = 0.0;
    for (double l : lts) sum += std::exp(l - max_lt);
    return max_lt + std::log(sum);
}

double bessel_i(double v, double x) {
    if (x == 0.0) return v == 0.0 ? 1.0 : 0.0;
    return std::exp(bessel_i_ln(v, x));
}

// ---------------------------------------------------------------------------
// MeijerGSpec
// ---------------------------------------------------------------------------

MeijerGSpec::MeijerGSpec(int m, int n, std::vector<double> a, std::vector<double> b)
    : m_(m), n_(n), a_(std::move(a)), b_(std::move(b)) {
    if (m < 0 || n < 0 || m > static_cast<int>(b_.size()) || n > static_cast<int>(a_.size())) {
        throw DomainError("MeijerGSpec: orders require 0 <= m <= q and 0 <= n <= p");
    }
    // Gamma(b_j - s) poles at b_j + k meet Gamma(1 - a_i + s) poles at a_i - 1 - k'
    // exactly when a_i - b_j is a positive integer.
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < m_; ++j) {
            const double diff = a_[i] - b_[j];
            if (diff > 0.5 && std::abs(diff - std::round(diff)) < 1e-9) {
                std::ostringstream os;
                os << "MeijerGSpec: a[" << i << "]=" << a_[i] << " and b[" << j << "]=" << b_[j]
                   << " put the two pole families on a shared lattice";
                throw DomainError(os.str());
            }
        }
    }
}

double MeijerGSpec::c_star() const { return m_ + n_ - 0.5 * (p() + q()); }

std::string MeijerGSpec::describe() const {
    std::ostringstream os;
    os << "G[" << m_ << "," << n_ << ";" << p() << "," << q() << "](a=";
    for (double v : a_) os << v << " ";
    os << "| b=";
    for (double v : b_) os << v << " ";
    os << ")";
    return os.str();
}

// ---------------------------------------------------------------------------
// SignedLogSum
// ---------------------------------------------------------------------------

void SignedLogSum::add(double log_abs, int sign) {
    if (sign == 0 || log_abs == kNegInf) return;
    if (log_abs > max_log_) {
        scaled_sum_ = scaled_sum_ * std::exp(max_log_ - log_abs) + sign;
        max_log_ = log_abs;
    } else {
        scaled_sum_ += sign * std::exp(log_abs - max_log_);
    }
}

void SignedLogSum::add_value(double v) {
    if (v == 0.0) return;
    add(std::log(std::abs(v)), v > 0.0 ? 1 : -1);
}

double SignedLogSum::value() const {
    if (scaled_sum_ == 0.0) return 0.0;
    return scaled_sum_ * std::exp(max_log_);
}

SignedLog SignedLogSum::signed_log() const {
    if (scaled_sum_ == 0.0) return {kNegInf, 0};
    return {max_log_ + std::log(std::abs(scaled_sum_)), scaled_sum_ > 0.0 ? 1 : -1};
}

// ---------------------------------------------------------------------------
// Mellin-Barnes contour evaluation
// ---------------------------------------------------------------------------

namespace {

// Gamma factors of the Mellin-Barnes integrand after cancelling pairs
// Gamma(b_j - s) / Gamma(a_k - s) with a_k - b_j a small non-negative integer
// into explicit rational factors. The pointing-error instances always carry
// such a pair with an enormous common argument; keeping the raw gammas there
// costs double precision its low digits.
struct IntegrandPlan {
    std::vector<double> num_b;  // Gamma(b - s)
    std::vector<double> num_a;  // Gamma(1 - a + s)
    std::vector<double> den_b;  // Gamma(1 - b + s)
    std::vector<double> den_a;  // Gamma(a - s)
    std::vector<std::pair<double, int>> rational;  // prod_{i<K} 1/(b + i - s)
    double ln_z = 0.0;
    double lgamma_scale = 0.0;  // largest |log-gamma| in play, for noise floors

    static IntegrandPlan build(const MeijerGSpec& spec, double ln_z) {
        IntegrandPlan plan;
        plan.ln_z = ln_z;
        const auto& a = spec.a();
        const auto& b = spec.b();
        std::vector<bool> b_used(spec.m(), false);
        for (int k = spec.n(); k < spec.p(); ++k) {
            bool paired = false;
            for (int j = 0; j < spec.m() && !paired; ++j) {
                if (b_used[j]) continue;
                const double d = a[k] - b[j];
                const double rd = std::round(d);
                if (std::abs(d - rd) < 1e-12 && rd >= 0.0 && rd <= 8.0) {
                    plan.rational.emplace_back(b[j], static_cast<int>(rd));
                    b_used[j] = true;
                    paired = true;
                }
            }
            if (!paired) plan.den_a.push_back(a[k]);
        }
        for (int j = 0; j < spec.m(); ++j) {
            if (!b_used[j]) plan.num_b.push_back(b[j]);
        }
        for (int k = 0; k < spec.n(); ++k) plan.num_a.push_back(a[k]);
        for (int j = spec.m(); j < spec.q(); ++j) plan.den_b.push_back(b[j]);
        for (double x : plan.num_b) {
            plan.lgamma_scale = std::max(plan.lgamma_scale, std::lgamma(std::abs(x) + 2.0));
        }
        for (double x : plan.den_a) {
            plan.lgamma_scale = std::max(plan.lgamma_scale, std::lgamma(std::abs(x) + 2.0));
        }
        return plan;
    }

    std::complex<double> log_at(std::complex<double> s) const {
        std::complex<double> r = s * ln_z;
        for (double x : num_b) r += ln_gamma(x - s);
        for (double x : num_a) r += ln_gamma(1.0 - x + s);
        for (double x : den_b) r -= ln_gamma(1.0 - x + s);
        for (double x : den_a) r -= ln_gamma(x - s);
        for (const auto& [base, kk] : rational) {
            for (int i = 0; i < kk; ++i) r -= std::log(base + i - s);
        }
        return r;
    }

    // signed-log value at a real point (residue assembly); gamma poles of
    // denominator factors annihilate the value
    SignedLog signed_log_at(double s) const {
        double lg = s * ln_z;
        int sign = 1;
        for (double x : num_b) {
            const SignedLog g = lgamma_signed(x - s);
            lg += g.log_abs;
            sign *= g.sign;
        }
        for (double x : num_a) {
            const SignedLog g = lgamma_signed(1.0 - x + s);
            lg += g.log_abs;
            sign *= g.sign;
        }
        for (double x : den_b) {
            const double arg = 1.0 - x + s;
            if (near_nonpositive_integer(arg, 1e-12)) return {kNegInf, 0};
            const SignedLog g = lgamma_signed(arg);
            lg -= g.log_abs;
            sign *= g.sign;
        }
        for (double x : den_a) {
            const double arg = x - s;
            if (near_nonpositive_integer(arg, 1e-12)) return {kNegInf, 0};
            const SignedLog g = lgamma_signed(arg);
            lg -= g.log_abs;
            sign *= g.sign;
        }
        for (const auto& [base, kk] : rational) {
            for (int i = 0; i < kk; ++i) {
                const double f = base + i - s;
                if (f == 0.0) return {kNegInf, 0};  // exact pole; caller avoids these
                lg -= std::log(std::abs(f));
                if (f < 0.0) sign = -sign;
            }
        }
        return {lg, sign};
    }
};

struct ContourIntegrand {
    const IntegrandPlan& plan;
    double sigma0;
    double scale;  // subtracted from the log-integrand to keep exp() in range

    double real_part(double u) const {
        const std::complex<double> l = plan.log_at({sigma0, u}) - scale;
        if (l.real() > 700.0) throw ConvergenceError("meijer_g: contour integrand overflow");
        return std::exp(l.real()) * std::cos(l.imag());
    }
};

// log |integrand| at s = sigma + i u; a gamma pole here can only come from a
// denominator factor (an integrand zero), reported as -inf-like
double phi_at(const IntegrandPlan& plan, double sigma, double u) {
    try {
        return plan.log_at({sigma, u}).real();
    } catch (const DomainError&) {
        return -1e300;
    }
}

// abscissa objective: the line magnitude probed at several heights, so that a
// reciprocal-gamma zero sitting on the axis cannot masquerade as a minimum
double phi_on_axis(const IntegrandPlan& plan, double sigma) {
    if (sigma == std::floor(sigma)) sigma += 1e-9;  // keep clear of exact poles
    double r = phi_at(plan, sigma, 0.0);
    r = std::max(r, phi_at(plan, sigma, 0.75));
    return std::max(r, phi_at(plan, sigma, 2.0));
}

// Gauss-Kronrod 7-15 pair on [lo, hi]; returns {kronrod, |kronrod - gauss|}.
struct PanelResult {
    double value;
    double error;
    double abs_integral;
};

constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename F>
PanelResult gk15(const F& f, double lo, double hi, int& nodes) {
    const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
    const double fc = f(c);
    nodes += 15;
    double resg = fc * kWg[3];
    double resk = fc * kWgk[7];
    double resa = std::abs(fc) * kWgk[7];
    for (int j = 0; j < 7; ++j) {
        const double x = h * kXgk[j];
        const double f1 = f(c - x), f2 = f(c + x);
        resk += kWgk[j] * (f1 + f2);
        resa += kWgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    return {resk * h, std::abs(resk - resg) * h, resa * h};
}

template <typename F>
PanelResult adapt_panel(const F& f, double lo, double hi, double tol, int depth, int& nodes,
                        int max_nodes) {
    const PanelResult r = gk15(f, lo, hi, nodes);
    // the second condition is the roundoff floor of the Kronrod-Gauss
    // difference itself; subdividing past it only accumulates noise
    if (r.error <= tol || r.error <= 1e-13 * r.abs_integral || depth >= 24) return r;
    if (nodes > max_nodes) throw ConvergenceError("meijer_g: contour quadrature node budget exhausted");
    const double mid = 0.5 * (lo + hi);
    const PanelResult l2 = adapt_panel(f, lo, mid, 0.5 * tol, depth + 1, nodes, max_nodes);
    const PanelResult r2 = adapt_panel(f, mid, hi, 0.5 * tol, depth + 1, nodes, max_nodes);
    return {l2.value + r2.value, l2.error + r2.error, l2.abs_integral + r2.abs_integral};
}

// residue of the integrand (without the 1/(2 pi i) factor) at a simple pole
// s* = a_k0 - 1 - k of Gamma(1 - a_k0 + s); returned in signed-log form
SignedLog left_pole_residue(const IntegrandPlan& plan, int k0, int k) {
    const double s = plan.num_a[k0] - 1.0 - k;
    double lg = s * plan.ln_z - std::lgamma(k + 1.0);
    int sign = (k % 2 == 0) ? 1 : -1;
    for (double x : plan.num_b) {
        const SignedLog g = lgamma_signed(x - s);
        lg += g.log_abs;
        sign *= g.sign;
    }
    for (size_t i = 0; i < plan.num_a.size(); ++i) {
        if (static_cast<int>(i) == k0) continue;
        const SignedLog g = lgamma_signed(1.0 - plan.num_a[i] + s);
        lg += g.log_abs;
        sign *= g.sign;
    }
    for (double x : plan.den_b) {
        const double arg = 1.0 - x + s;
        if (near_nonpositive_integer(arg, 1e-12)) return {kNegInf, 0};  // reciprocal gamma zero
        const SignedLog g = lgamma_signed(arg);
        lg -= g.log_abs;
        sign *= g.sign;
    }
    for (double x : plan.den_a) {
        const double arg = x - s;
        if (near_nonpositive_integer(arg, 1e-12)) return {kNegInf, 0};
        const SignedLog g = lgamma_signed(arg);
        lg -= g.log_abs;
        sign *= g.sign;
    }
    for (const auto& [base, kk] : plan.rational) {
        for (int i = 0; i < kk; ++i) {
            const double f = base + i - s;
            if (f == 0.0) return {kNegInf, 0};
            lg -= std::log(std::abs(f));
            if (f < 0.0) sign = -sign;
        }
    }
    return {lg, sign};
}

struct AbscissaChoice {
    double sigma0;
    std::vector<std::pair<int, int>> crossed;  // (a-index, pole order k) left poles right of sigma0
};

// Place the contour where the line magnitude is smallest. For n = 0 the whole
// half-line left of the right poles is admissible; for n >= 1 the line may
// cross left poles, each compensated by an explicit residue.
AbscissaChoice choose_abscissa(const MeijerGSpec& spec, const IntegrandPlan& plan, double ln_z) {
    const auto& a = spec.a();
    const auto& b = spec.b();
    double R = b[0];
    for (int j = 1; j < spec.m(); ++j) R = std::min(R, b[j]);

    auto phi = [&](double sg) { return phi_on_axis(plan, sg); };

    AbscissaChoice out{R - 0.5, {}};
    if (spec.n() == 0) {
        // coarse scan + golden-section refinement over (R - span, R - 1/4];
        // the saddle sits near -z^{1/(q-p)} for large z
        const int qp = std::max(1, spec.q() - spec.p());
        const double span = 8.0 + 4.0 * std::exp(std::max(0.0, ln_z) / qp);
        double lo = R - std::min(span, 3400.0), hi = R - 0.25;
        double best = phi(hi), best_s = hi;
        const int N = 160;
        for (int i = 0; i <= N; ++i) {
            const double sg = lo + (hi - lo) * i / N;
            const double v = phi(sg);
            if (v < best) {
                best = v;
                best_s = sg;
            }
        }
        double gl = std::max(lo, best_s - (hi - lo) / N);
        double gr = std::min(hi, best_s + (hi - lo) / N);
        for (int it = 0; it < 40; ++it) {
            const double m1 = gl + 0.381966 * (gr - gl), m2 = gr - 0.381966 * (gr - gl);
            if (phi(m1) < phi(m2)) gr = m2;
            else gl = m1;
        }
        out.sigma0 = 0.5 * (gl + gr);
        return out;
    }

    double Lam = a[0] - 1.0;
    for (int k = 1; k < spec.n(); ++k) Lam = std::max(Lam, a[k] - 1.0);

    // candidates: midpoint of the separating gap (when one exists) and
    // half-integer offsets below the left-pole top (each crossing more poles)
    std::vector<double> cands;
    if (R - Lam > 1e-3) {
        const double lo = Lam + 0.05 * (R - Lam), hi = R - 0.05 * (R - Lam);
        const int N = 40;
        for (int i = 0; i <= N; ++i) cands.push_back(lo + (hi - lo) * i / N);
    }
    // left poles of distinct a_k families may coincide; crossing is only safe
    // while every crossed pole is simple
    bool families_simple = true;
    for (int i = 0; i < spec.n() && families_simple; ++i) {
        for (int k = i + 1; k < spec.n(); ++k) {
            const double diff = a[i] - a[k];
            if (std::abs(diff - std::round(diff)) < 1e-9) families_simple = false;
        }
    }
    if (families_simple) {
        const int kmax = static_cast<int>(
            std::min(500.0, 10.0 + 4.0 * std::exp(std::max(0.0, ln_z) /
                                                  std::max(1, spec.q() - spec.p()))));
        double prev = 1e308;
        for (int k = 0; k < kmax; ++k) {
            const double sg = Lam - k - 0.5;
            if (sg > R - 0.25) continue;
            const double v = phi(sg);
            cands.push_back(sg);
            if (k > 3 && v > prev + 40.0) break;  // well past the saddle
            prev = v;
        }
    }
    if (cands.empty()) cands.push_back(std::min(R, Lam + 1.0) - 0.5);

    double best = 1e308, best_s = cands.front();
    for (double sg : cands) {
        const double v = phi(sg);
        if (v < best) {
            best = v;
            best_s = sg;
        }
    }
    out.sigma0 = best_s;
    for (int i = 0; i < spec.n(); ++i) {
        for (int k = 0; a[i] - 1.0 - k > out.sigma0; ++k) out.crossed.emplace_back(i, k);
    }
    return out;
}

GResult contour_eval(const MeijerGSpec& spec, double z, const GEvalOptions& opts) {
    const double ln_z = std::log(z);
    const double cstar = spec.c_star();
    if (cstar <= 0.05) {
        throw DomainError("meijer_g: contour integral requires m + n > (p+q)/2 (c* = " +
                          std::to_string(cstar) + ")");
    }
    if (spec.n() == 0 && spec.q() > spec.p()) {
        // deep exponential tail: G^{m,0} ~ exp(-(q-p) z^{1/(q-p)}); report the
        // underflow in log form without driving the contour machinery there
        const int qp = spec.q() - spec.p();
        const double decay = -qp * std::pow(z, 1.0 / qp);
        if (decay < -1200.0) {
            GResult out;
            out.value = 0.0;
            out.log_abs = decay;  // leading-order estimate
            out.sign = 1;
            out.abs_err = 1e-300;
            out.diag.tail_estimate = 0.0;
            return out;
        }
    }
    const IntegrandPlan plan = IntegrandPlan::build(spec, ln_z);
    const AbscissaChoice ab = choose_abscissa(spec, plan, ln_z);
    ContourIntegrand f{plan, ab.sigma0, 0.0};
    f.scale = phi_on_axis(plan, ab.sigma0);

    // algebraic growth exponent of |integrand| in u, for the tail bound
    double nu = 0.0;
    for (double x : plan.num_b) nu += x - ab.sigma0 - 0.5;
    for (double x : plan.num_a) nu += 0.5 - x + ab.sigma0;
    for (double x : plan.den_b) nu -= 0.5 - x + ab.sigma0;
    for (double x : plan.den_a) nu -= x - ab.sigma0 - 0.5;
    for (const auto& [base, kk] : plan.rational) nu -= kk;

    const double w = std::clamp(4.0 * kPi / (std::abs(ln_z) + 1.0), 0.25, 2.0);
    auto integrand = [&](double u) { return f.real_part(u); };

    int nodes = 0;
    double acc = 0.0, err = 0.0, abs_acc = 0.0;
    double u = 0.0;
    int quiet = 0;
    double last_panel = 0.0;
    double prev_panel = 1e308;
    double peak = 0.3 * w;  // the scaled integrand is O(1) near u = 0
    while (true) {
        const double tol_here =
            std::max(opts.rel_tol * std::max(std::abs(acc), peak) / 8.0, 3e-16 * peak);
        const PanelResult pr =
            adapt_panel(integrand, u, u + w, tol_here, 0, nodes, opts.max_quadrature_nodes);
        acc += pr.value;
        err += pr.error;
        abs_acc += pr.abs_integral;
        peak = std::max(peak, std::abs(pr.value));
        u += w;
        last_panel = std::abs(pr.value) + pr.error;
        // stop on a run of small panels of decreasing magnitude; the geometric
        // tail majorant below covers what remains
        if (last_panel < opts.rel_tol * std::max(std::abs(acc), peak * 1e-4) / 4.0 &&
            last_panel <= prev_panel) {
            if (++quiet >= 3) break;
        } else {
            quiet = 0;
        }
        prev_panel = last_panel;
        if (u > 2000.0) throw ConvergenceError("meijer_g: contour tail failed to decay");
        if (nodes > opts.max_quadrature_nodes) {
            throw ConvergenceError("meijer_g: contour quadrature node budget exhausted");
        }
    }
    // geometric tail majorant from the proven decay rate
    double r_tail = std::exp(-kPi * cstar * w);
    if (nu > 0.0) r_tail *= std::pow((u + w) / u, nu);
    r_tail = std::min(r_tail, 0.95);
    const double tail = last_panel * r_tail / (1.0 - r_tail);

    // value = exp(scale)/pi * acc + crossed residues
    SignedLogSum total;
    const double lacc = std::log(std::max(std::abs(acc), 1e-300)) + f.scale - std::log(kPi);
    if (acc != 0.0) total.add(lacc, acc > 0.0 ? 1 : -1);
    for (const auto& [ai, k] : ab.crossed) {
        const SignedLog res = left_pole_residue(plan, ai, k);
        total.add(res.log_abs, res.sign);
    }

    GResult out;
    const SignedLog sl = total.signed_log();
    out.log_abs = sl.log_abs;
    out.sign = sl.sign;
    out.value = total.value();
    // error: quadrature + tail + cancellation floor of the scaled sum; the
    // floor widens with the largest log-gamma magnitude in play
    const double floor = (3e-16 + 1e-16 * plan.lgamma_scale) * abs_acc;
    out.abs_err = (err + tail + floor) * std::exp(f.scale) / kPi;
    out.diag.abscissa = ab.sigma0;
    out.diag.nodes = nodes;
    out.diag.tail_estimate = tail * std::exp(f.scale) / kPi;
    out.diag.crossed_poles = static_cast<int>(ab.crossed.size());
    if (log::enabled(log::Level::debug)) {
        log::debug("meijer_g contour %s z=%.6g sigma0=%.4f nodes=%d tail=%.3e value=%.12e",
                   spec.describe().c_str(), z, ab.sigma0, nodes, out.diag.tail_estimate, out.value);
    }
    return out;
}

GResult residue_eval(const MeijerGSpec& spec, double z, const GEvalOptions& opts) {
    const auto& a = spec.a();
    const auto& b = spec.b();
    // A numerator family h is dead when some denominator a-gamma sits on its
    // lattice at or below b_h: every residue then carries a reciprocal-gamma
    // zero. Only alive families contribute, and each alive family must be
    // lattice-separated from every other b (alive or dead) so all its poles
    // stay simple.
    std::vector<bool> alive(spec.m(), true);
    for (int h = 0; h < spec.m(); ++h) {
        for (int i = spec.n(); i < spec.p(); ++i) {
            const double d = a[i] - b[h];
            if (d < 0.5 && std::abs(d - std::round(d)) < 1e-12) alive[h] = false;
        }
    }
    for (int i = 0; i < spec.m(); ++i) {
        if (!alive[i]) continue;
        for (int j = 0; j < spec.m(); ++j) {
            if (j == i) continue;
            const double diff = b[i] - b[j];
            if (std::abs(diff - std::round(diff)) < opts.pole_separation_min) {
                throw PoleCollisionError("meijer_g_residue_series: b[" + std::to_string(i) +
                                         "] and b[" + std::to_string(j) +
                                         "] lie on a shared pole lattice");
            }
        }
    }
    const double ln_z = std::log(z);
    SignedLogSum sum;
    double max_term = kNegInf;
    int terms = 0;
    for (int h = 0; h < spec.m(); ++h) {
        if (!alive[h]) continue;
        double prev_mag = kNegInf;
        int small_in_row = 0;
        for (int k = 0; k < 600; ++k) {
            const double s = b[h] + k;
            double lg = s * ln_z - std::lgamma(k + 1.0);
            int sign = (k % 2 == 0) ? 1 : -1;
            bool zero = false;
            for (int j = 0; j < spec.m(); ++j) {
                if (j == h) continue;
                const SignedLog g = lgamma_signed(b[j] - s);
                lg += g.log_abs;
                sign *= g.sign;
            }
            for (int i = 0; i < spec.n(); ++i) {
                const SignedLog g = lgamma_signed(1.0 - a[i] + s);
                lg += g.log_abs;
                sign *= g.sign;
            }
            for (int j = spec.m(); j < spec.q() && !zero; ++j) {
                const double arg = 1.0 - b[j] + s;
                if (near_nonpositive_integer(arg, 1e-12)) { zero = true; break; }
                const SignedLog g = lgamma_signed(arg);
                lg -= g.log_abs;
                sign *= g.sign;
            }
            for (int i = spec.n(); i < spec.p() && !zero; ++i) {
                const double arg = a[i] - s;
                if (near_nonpositive_integer(arg, 1e-12)) { zero = true; break; }
                const SignedLog g = lgamma_signed(arg);
                lg -= g.log_abs;
                sign *= g.sign;
            }
            ++terms;
            if (zero) continue;  // transient reciprocal-gamma zero; later k revive
            sum.add(lg, sign);
            max_term = std::max(max_term, lg);
            const double ref = std::max(sum.signed_log().log_abs, max_term - 35.0);
            if (lg < ref + std::log(opts.rel_tol) - 3.0 && lg < prev_mag) {
                if (++small_in_row >= 3) break;
            } else {
                small_in_row = 0;
            }
            prev_mag = lg;
            if (k == 599) throw ConvergenceError("meijer_g_residue_series: series stalled");
        }
    }
    GResult out;
    const SignedLog sl = sum.signed_log();
    out.log_abs = sl.log_abs;
    out.sign = sl.sign;
    out.value = sum.value();
    // cancellation-aware roundoff floor plus truncation allowance
    out.abs_err = std::exp(max_term) * 3e-16 * terms + std::abs(out.value) * opts.rel_tol;
    out.diag.series_terms = terms;
    return out;
}

}  // namespace

GResult meijer_g_residue_series(const MeijerGSpec& spec, double z, const GEvalOptions& opts) {
    if (!(z > 0.0)) throw DomainError("meijer_g_residue_series: requires z > 0");
    return residue_eval(spec, z, opts);
}

GResult meijer_g(const MeijerGSpec& spec, double z, const GEvalOptions& opts) {
    if (!(z > 0.0)) throw DomainError("meijer_g: requires z > 0");
    if (opts.method == GMethod::residue_series) return residue_eval(spec, z, opts);
    GResult r = contour_eval(spec, z, opts);
    if (opts.method == GMethod::auto_check) {
        // cross-check through the series; nudge near-colliding parameters so
        // the check exists, and record that the numbers compared are nudged
        MeijerGSpec probe = spec;
        bool nudged = false;
        try {
            GResult s = residue_eval(probe, z, opts);
            r.diag.cross_check_rel = std::abs(s.value - r.value) /
                                     std::max({std::abs(r.value), std::abs(s.value), 1e-300});
        } catch (const PoleCollisionError&) {
            std::vector<double> bn = spec.b();
            for (size_t i = 0; i < bn.size(); ++i) bn[i] += 1e-8 * (i % 2 == 0 ? 1.0 : -1.0);
            nudged = true;
            try {
                MeijerGSpec ns(spec.m(), spec.n(), spec.a(), bn);
                GResult s = residue_eval(ns, z, opts);
                r.diag.cross_check_rel = std::abs(s.value - r.value) /
                                         std::max({std::abs(r.value), std::abs(s.value), 1e-300});
            } catch (const std::exception&) {
                r.diag.cross_check_rel = -1.0;
            }
        }
        r.diag.nudged = nudged;
        if (r.diag.cross_check_rel > 1e-6) {
            log::info("meijer_g auto: contour/series gap %.3e for %s at z=%.6g%s",
                      r.diag.cross_check_rel, spec.describe().c_str(), z,
                      nudged ? " (nudged cross-check)" : "");
        }
    }
    return r;
}

}  // namespace linkmix::specfun
