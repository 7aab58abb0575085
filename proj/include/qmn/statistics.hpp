/**
 * Copyright 2026 The qmultinomial Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "qmn/combinat.hpp"
#include "qmn/optics.hpp"
#include "qmn/transition.hpp"

namespace qmn {

/// n (n-1) ... (n-r+1); zero when r > n.
template <typename Scalar>
Scalar falling_factorial(Scalar n, int r) {
    Scalar out(1);
    for (int i = 0; i < r; ++i) out *= (n - Scalar(i));
    return out;
}

// --- Two-port Krawtchouk structure --------------------------------------

/// Beam splitter with m photons and transmittance T. Port 1 carries n input
/// photons and c output photons throughout.
template <typename Scalar = double>
struct KrawtchoukContext {
    int m = 0;
    Scalar T = 0;
    Scalar R = 1;

    KrawtchoukContext(int photons, Scalar transmittance)
        : m(photons), T(transmittance), R(Scalar(1) - transmittance) {
        if (photons < 0) throw DomainError("photon number must be non-negative");
        if (!(transmittance >= Scalar(0) && transmittance <= Scalar(1))) {
            throw DomainError("transmittance must lie in [0, 1]");
        }
    }

    /// Squared norm binom(m, n) (TR)^n.
    Scalar h(int n) const { return binomial(m, n).template as<Scalar>() * std::pow(T * R, n); }

    /// Classical binomial P_0(c) = binom(m, c) T^(m-c) R^c.
    Scalar classical(int c) const {
        return binomial(m, c).template as<Scalar>() * std::pow(T, m - c) * std::pow(R, c);
    }
};

namespace detail {

template <typename Scalar>
void check_range(const KrawtchoukContext<Scalar>& ctx, int v, const char* name) {
    if (v < 0 || v > ctx.m) {
        throw DomainError(std::string(name) + " = " + std::to_string(v) + " outside [0, " + std::to_string(ctx.m) + "]");
    }
}

template <typename Scalar>
std::vector<Scalar> binomial_series(int power, Scalar slope) {
    std::vector<Scalar> coeffs(static_cast<std::size_t>(power) + 1);
    for (int a = 0; a <= power; ++a) coeffs[a] = binomial(power, a).template as<Scalar>() * std::pow(slope, a);
    return coeffs;
}

} // namespace detail

/// g_n(c) = [s^n] (1 + T s)^c (1 - R s)^(m - c), i.e. K_n(c) / n!.
template <typename Scalar>
Scalar krawtchouk_g(const KrawtchoukContext<Scalar>& ctx, int n, int c) {
    detail::check_range(ctx, n, "n");
    detail::check_range(ctx, c, "c");
    const auto up = detail::binomial_series(c, ctx.T);
    const auto down = detail::binomial_series(ctx.m - c, -ctx.R);
    Scalar coeff(0);
    for (int a = 0; a <= n; ++a) {
        const int b = n - a;
        if (a < static_cast<int>(up.size()) && b < static_cast<int>(down.size())) coeff += up[a] * down[b];
    }
    return coeff;
}

/// P_n(c) = P_0(c) g_n(c)^2 / h_n, the squared orthonormal Krawtchouk function.
template <typename Scalar>
Scalar p_via_krawtchouk(const KrawtchoukContext<Scalar>& ctx, int n, int c) {
    const Scalar hn = ctx.h(n);
    if (!(hn > Scalar(0))) throw DomainError("Krawtchouk norm vanishes; need 0 < T < 1 or n in {0, m}");
    const Scalar g = krawtchouk_g(ctx, n, c);
    return ctx.classical(c) * g * g / hn;
}

/// G_n(s) = [u^n v^n] (T(1-Ru)(1-Rv) + s R(1+Tu)(1+Tv))^m / h_n, expanded as a
/// bivariate polynomial truncated at degree n in each variable.
template <typename Scalar>
Scalar pgf_value(const KrawtchoukContext<Scalar>& ctx, int n, Scalar s) {
    detail::check_range(ctx, n, "n");
    const Scalar hn = ctx.h(n);
    if (!(hn > Scalar(0))) throw DomainError("Krawtchouk norm vanishes; need 0 < T < 1 or n in {0, m}");
    const Scalar T = ctx.T, R = ctx.R;
    // Bracket coefficients indexed [deg u][deg v].
    RealMatrix<Scalar> bracket(2, 2);
    bracket << T + s * R, T * R * (s - Scalar(1)),
               T * R * (s - Scalar(1)), T * R * R + s * R * T * T;
    RealMatrix<Scalar> poly = RealMatrix<Scalar>::Zero(n + 1, n + 1);
    poly(0, 0) = 1;
    for (int step = 0; step < ctx.m; ++step) {
        RealMatrix<Scalar> next = RealMatrix<Scalar>::Zero(n + 1, n + 1);
        for (int a = 0; a <= n; ++a) {
            for (int b = 0; b <= n; ++b) {
                if (poly(a, b) == Scalar(0)) continue;
                for (int da = 0; da <= 1 && a + da <= n; ++da) {
                    for (int db = 0; db <= 1 && b + db <= n; ++db) next(a + da, b + db) += poly(a, b) * bracket(da, db);
                }
            }
        }
        poly.swap(next);
    }
    return poly(n, n) / hn;
}

// --- Factorial moments --------------------------------------------------

template <typename Scalar>
struct QuantumClassical {
    Scalar quantum = 0;
    Scalar classical = 0;
};

/// r-th factorial moment of output port j:
///   sum over compositions q of r into k parts of
///   multinomial(r, q)^e * prod_i p_ij^q_i n_i^(q_i),
/// with e = 2 for bosons and e = 1 for distinguishable particles.
template <typename Scalar>
QuantumClassical<Scalar> factorial_moment_closed(const InterferometerMatrix<Scalar>& u, const Composition& input,
                                                 int port, int r) {
    if (r < 1) throw DomainError("factorial moment order must be >= 1");
    if (port < 0 || port >= u.ports()) throw DomainError("output port index out of range");
    if (input.ports() != u.ports()) throw DomainError("input composition length does not match the interferometer");
    const RealMatrix<Scalar> p = u.probabilities();
    QuantumClassical<Scalar> out;
    for (const Composition& q : enumerate_compositions(r, u.ports())) {
        Scalar term(1);
        for (int i = 0; i < u.ports() && term != Scalar(0); ++i) {
            term *= std::pow(p(i, port), q[i]) * falling_factorial(static_cast<Scalar>(input[i]), q[i]);
        }
        if (term == Scalar(0)) continue;
        const Scalar coeff = multinomial(r, q).template as<Scalar>();
        out.quantum += coeff * coeff * term;
        out.classical += coeff * term;
    }
    return out;
}

/// Two-port specialization: sum_j binom(r, j)^e T^j R^(r-j) n^(j) (m-n)^(r-j).
template <typename Scalar>
QuantumClassical<Scalar> two_port_factorial_moment(Scalar T, int m, int n, int r) {
    const Scalar R = Scalar(1) - T;
    QuantumClassical<Scalar> out;
    for (int j = 0; j <= r; ++j) {
        const Scalar b = binomial(r, j).template as<Scalar>();
        const Scalar term = std::pow(T, j) * std::pow(R, r - j) * falling_factorial(static_cast<Scalar>(n), j) *
                            falling_factorial(static_cast<Scalar>(m - n), r - j);
        out.quantum += b * b * term;
        out.classical += b * term;
    }
    return out;
}

/// Factorial moments r = 1..r_max of port j summed directly over a distribution.
template <typename Scalar>
std::vector<Scalar> moments_bruteforce(const OutputDistribution<Scalar>& dist, int port, int r_max) {
    if (r_max < 1) throw DomainError("r_max must be >= 1");
    if (port < 0 || port >= dist.input.ports()) throw DomainError("output port index out of range");
    std::vector<Scalar> out(static_cast<std::size_t>(r_max), Scalar(0));
    for (const auto& e : dist.entries) {
        const Scalar cj = static_cast<Scalar>(e.output[port]);
        for (int r = 1; r <= r_max; ++r) out[r - 1] += e.probability * falling_factorial(cj, r);
    }
    return out;
}

/// E[c_j c_l] for j != l. The quantum value adds the coherence terms
/// U_ij conj(U_i'j) U_i'l conj(U_il) n_i n_i' that vanish classically.
template <typename Scalar>
QuantumClassical<Scalar> cross_moment(const InterferometerMatrix<Scalar>& u, const Composition& input, int j, int l) {
    const int k = u.ports();
    if (j == l) throw DomainError("cross moment needs two distinct ports");
    if (j < 0 || l < 0 || j >= k || l >= k) throw DomainError("output port index out of range");
    if (input.ports() != k) throw DomainError("input composition length does not match the interferometer");
    const RealMatrix<Scalar> p = u.probabilities();
    QuantumClassical<Scalar> out;
    for (int i = 0; i < k; ++i) {
        const Scalar ni = static_cast<Scalar>(input[i]);
        const Scalar same = p(i, j) * p(i, l) * falling_factorial(ni, 2);
        out.quantum += same;
        out.classical += same;
        for (int i2 = 0; i2 < k; ++i2) {
            if (i2 == i) continue;
            const Scalar pair = ni * static_cast<Scalar>(input[i2]);
            const Scalar incoherent = p(i, j) * p(i2, l) * pair;
            const Scalar coherent =
                std::real(u(i, j) * std::conj(u(i2, j)) * u(i2, l) * std::conj(u(i, l))) * pair;
            out.quantum += incoherent + coherent;
            out.classical += incoherent;
        }
    }
    return out;
}

template <typename Scalar>
Scalar port_mean(const InterferometerMatrix<Scalar>& u, const Composition& input, int port) {
    return factorial_moment_closed(u, input, port, 1).quantum;
}

template <typename Scalar>
QuantumClassical<Scalar> covariance(const InterferometerMatrix<Scalar>& u, const Composition& input, int j, int l) {
    auto cross = cross_moment(u, input, j, l);
    const Scalar means = port_mean(u, input, j) * port_mean(u, input, l);
    return {cross.quantum - means, cross.classical - means};
}

/// Quantum minus classical variance: 2 sum_{i < i'} p_ij p_i'j n_i n_i'.
template <typename Scalar>
Scalar variance_excess(const InterferometerMatrix<Scalar>& u, const Composition& input, int port) {
    const RealMatrix<Scalar> p = u.probabilities();
    Scalar out(0);
    for (int i = 0; i < u.ports(); ++i) {
        for (int i2 = i + 1; i2 < u.ports(); ++i2) out += p(i, port) * p(i2, port) * input[i] * input[i2];
    }
    return Scalar(2) * out;
}

// --- Cumulants ----------------------------------------------------------

template <typename Scalar>
using Cumulants = std::array<Scalar, 4>;

/// kappa_1..kappa_4 from factorial moments F_1..F_4, via raw moments
/// (Stirling numbers of the second kind) and the moment-cumulant relations.
template <typename Scalar>
Cumulants<Scalar> cumulants_from_factorial(const std::array<Scalar, 4>& f) {
    const Scalar m1 = f[0];
    const Scalar m2 = f[1] + f[0];
    const Scalar m3 = f[2] + 3 * f[1] + f[0];
    const Scalar m4 = f[3] + 6 * f[2] + 7 * f[1] + f[0];
    return {m1,
            m2 - m1 * m1,
            m3 - 3 * m2 * m1 + 2 * m1 * m1 * m1,
            m4 - 4 * m3 * m1 - 3 * m2 * m2 + 12 * m2 * m1 * m1 - 6 * m1 * m1 * m1 * m1};
}

/// Cumulants of output port j. Bosons and distinguishable particles use the
/// closed-form factorial moments; fermions have none and go through the
/// full output distribution.
template <typename Scalar>
Cumulants<Scalar> cumulants(const InterferometerMatrix<Scalar>& u, const Composition& input, int port, Statistics kind) {
    std::array<Scalar, 4> f{};
    if (kind == Statistics::fermion) {
        const auto moments = moments_bruteforce(output_distribution(u, input, kind), port, 4);
        std::copy(moments.begin(), moments.end(), f.begin());
    } else {
        for (int r = 1; r <= 4; ++r) {
            const auto fm = factorial_moment_closed(u, input, port, r);
            f[r - 1] = kind == Statistics::boson ? fm.quantum : fm.classical;
        }
    }
    return cumulants_from_factorial(f);
}

/// Two-port closed forms, port 1 holding n of the m input photons.
template <typename Scalar>
Scalar two_port_mean(Scalar T, int m, int n) {
    return n * T + (m - n) * (Scalar(1) - T);
}

template <typename Scalar>
QuantumClassical<Scalar> two_port_variance(Scalar T, int m, int n) {
    const Scalar tr = T * (Scalar(1) - T);
    return {tr * (m + 2 * n * (m - n)), tr * m};
}

/// Shared by bosons and distinguishable particles.
template <typename Scalar>
Scalar two_port_kappa3(Scalar T, int m, int n) {
    const Scalar R = Scalar(1) - T;
    return T * R * (R - T) * (2 * n - m);
}

/// kappa4_Q - kappa4_cl = 2 TR n(m-n) [1 - 3 sigma TR], sigma = n(m-n) + m + 3.
template <typename Scalar>
Scalar two_port_kappa4_difference(Scalar T, int m, int n) {
    const Scalar tr = T * (Scalar(1) - T);
    const Scalar pairs = static_cast<Scalar>(n * (m - n));
    const Scalar sigma = pairs + m + 3;
    return 2 * tr * pairs * (1 - 3 * sigma * tr);
}

/// Open interval of T on which the kappa4 difference is negative.
template <typename Scalar = double>
std::pair<Scalar, Scalar> kappa4_negative_interval(int m, int n) {
    const Scalar sigma = static_cast<Scalar>(n * (m - n) + m + 3);
    const Scalar root = std::sqrt(Scalar(1) - Scalar(4) / (3 * sigma));
    return {(1 - root) / 2, (1 + root) / 2};
}

/// kappa3_Q - kappa3_cl for the k-port Fourier interferometer fed one photon per port.
template <typename Scalar = double>
Scalar fourier_kappa3_difference(int k) {
    return Scalar(5) * (k - 1) * (k - 2) / (Scalar(k) * k);
}

// --- Report -------------------------------------------------------------

template <typename Scalar>
struct MomentReport {
    int port = 0;
    std::array<Scalar, 4> factorial_quantum{};
    std::array<Scalar, 4> factorial_classical{};
    Scalar mean = 0;
    Scalar variance_quantum = 0;
    Scalar variance_classical = 0;
    Cumulants<Scalar> cumulants_quantum{};
    Cumulants<Scalar> cumulants_classical{};
};

template <typename Scalar>
MomentReport<Scalar> moment_report(const InterferometerMatrix<Scalar>& u, const Composition& input, int port) {
    MomentReport<Scalar> rep;
    rep.port = port;
    for (int r = 1; r <= 4; ++r) {
        const auto fm = factorial_moment_closed(u, input, port, r);
        rep.factorial_quantum[r - 1] = fm.quantum;
        rep.factorial_classical[r - 1] = fm.classical;
    }
    rep.cumulants_quantum = cumulants_from_factorial(rep.factorial_quantum);
    rep.cumulants_classical = cumulants_from_factorial(rep.factorial_classical);
    rep.mean = rep.factorial_quantum[0];
    rep.variance_quantum = rep.cumulants_quantum[1];
    rep.variance_classical = rep.cumulants_classical[1];
    return rep;
}

} // namespace qmn
