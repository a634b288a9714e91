#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "suprec/hadamard.hpp"

namespace suprec {

// Complex field amplitudes across modes, in units of sqrt(photons):
// amplitude a means a coherent state with mean photon number |a|^2.
using AmplitudeVector = std::vector<std::complex<double>>;

inline double total_energy(const AmplitudeVector& v) {
    double e = 0.0;
    for (const auto& a : v) e += std::norm(a);
    return e;
}

// Real square matrix, row-major.
struct SquareMatrix {
    int n = 0;
    std::vector<double> a;

    SquareMatrix() = default;
    explicit SquareMatrix(int size) : n(size), a(static_cast<std::size_t>(size) * size, 0.0) {}

    double at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
    double& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }

    static SquareMatrix identity(int size) {
        SquareMatrix m(size);
        for (int i = 0; i < size; ++i) m.at(i, i) = 1.0;
        return m;
    }
};

inline SquareMatrix rescaled_matrix(const HadamardMatrix& h) {
    SquareMatrix w(h.order);
    w.a = rescaled(h);
    return w;
}

// Max-entry deviation of W^T W from the identity.
inline double orthogonality_defect(const SquareMatrix& w) {
    double worst = 0.0;
    for (int i = 0; i < w.n; ++i)
        for (int j = 0; j < w.n; ++j) {
            double dot = 0.0;
            for (int k = 0; k < w.n; ++k) dot += w.at(k, i) * w.at(k, j);
            worst = std::max(worst, std::abs(dot - (i == j ? 1.0 : 0.0)));
        }
    return worst;
}

// One two-mode element: amplitudes (a, b) are mapped through the 2x2
// orthogonal sign_convention matrix, then both outputs are damped by
// sqrt(transmission).
struct BeamSplitterOp {
    int mode_a = 0;
    int mode_b = 1;
    double power_reflectivity = 0.0;
    std::array<double, 4> sign_convention = {1.0, 0.0, 0.0, 1.0};  // s00 s01 s10 s11
    double transmission = 1.0;
};

struct CircuitPlan {
    int num_modes = 0;
    std::vector<BeamSplitterOp> ops;
};

inline BeamSplitterOp make_op(int a, int b, const std::array<double, 4>& s, double transmission = 1.0) {
    BeamSplitterOp op;
    op.mode_a = a;
    op.mode_b = b;
    op.sign_convention = s;
    op.power_reflectivity = s[1] * s[1];
    op.transmission = transmission;
    return op;
}

inline AmplitudeVector encode_word(const Codeword& w, double n_bar) {
    if (n_bar < 0.0) throw std::domain_error("encode_word: negative photon number");
    double amp = std::sqrt(n_bar);
    AmplitudeVector v(w.signs.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = w.signs[i] * amp;
    return v;
}

inline AmplitudeVector apply_matrix(const SquareMatrix& w, const AmplitudeVector& v) {
    if (static_cast<std::size_t>(w.n) != v.size()) throw std::invalid_argument("apply_matrix: dimension mismatch");
    AmplitudeVector out(v.size(), 0.0);
    for (int i = 0; i < w.n; ++i) {
        std::complex<double> acc = 0.0;
        for (int j = 0; j < w.n; ++j) acc += w.at(i, j) * v[j];
        out[i] = acc;
    }
    return out;
}

inline void apply_op(const BeamSplitterOp& op, AmplitudeVector& v) {
    double damp = std::sqrt(op.transmission);
    std::complex<double> a = v[op.mode_a], b = v[op.mode_b];
    v[op.mode_a] = damp * (op.sign_convention[0] * a + op.sign_convention[1] * b);
    v[op.mode_b] = damp * (op.sign_convention[2] * a + op.sign_convention[3] * b);
}

inline AmplitudeVector apply_plan(const CircuitPlan& plan, const AmplitudeVector& v) {
    if (static_cast<std::size_t>(plan.num_modes) != v.size())
        throw std::invalid_argument("apply_plan: dimension mismatch");
    AmplitudeVector out = v;
    for (const auto& op : plan.ops) apply_op(op, out);
    return out;
}

// Composes the plan (ignoring transmission only if lossless) into a matrix by
// propagating basis vectors; with unit transmissions this is the orthogonal
// matrix the plan implements.
inline SquareMatrix compose_plan(const CircuitPlan& plan) {
    SquareMatrix m(plan.num_modes);
    for (int j = 0; j < plan.num_modes; ++j) {
        AmplitudeVector e(plan.num_modes, 0.0);
        e[j] = 1.0;
        AmplitudeVector col = apply_plan(plan, e);
        for (int i = 0; i < plan.num_modes; ++i) m.at(i, j) = col[i].real();
    }
    return m;
}

// Reck-style triangular decomposition of an orthogonal matrix into two-mode
// Givens operations. Ops are ordered so that mode l first interacts in group
// l with modes 0..l-1 in order, matching the arrival-ordered memory layout.
// Composing the returned plan reproduces W within 1e-10 per entry.
inline CircuitPlan decompose_triangular(const SquareMatrix& w) {
    if (orthogonality_defect(w) >= 1e-10)
        throw std::invalid_argument("decompose_triangular: input is not orthogonal within 1e-10");
    int n = w.n;
    CircuitPlan plan;
    plan.num_modes = n;
    if (n < 2) return plan;

    // Reduce B = W^T to diagonal by column rotations; recorded rotations G_k
    // satisfy W^T G_1 ... G_m = D, hence W = G_1 ... G_m D, i.e. the plan
    // applies D first and then the rotations in reverse recorded order.
    SquareMatrix b(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) b.at(i, j) = w.at(j, i);

    struct Rot {
        int i, l;
        double c, s;
    };
    std::vector<Rot> recorded;
    for (int l = n - 1; l >= 1; --l) {
        for (int i = l - 1; i >= 0; --i) {
            double x = b.at(l, i), piv = b.at(l, l);
            double r = std::hypot(x, piv);
            if (r == 0.0) continue;
            double c = piv / r, s = -x / r;
            // Column update: col_i <- c col_i + s col_l ; col_l <- -s col_i + c col_l.
            for (int row = 0; row < n; ++row) {
                double vi = b.at(row, i), vl = b.at(row, l);
                b.at(row, i) = c * vi + s * vl;
                b.at(row, l) = -s * vi + c * vl;
            }
            recorded.push_back({i, l, c, s});
        }
    }

    std::vector<int> flip(n, 1);
    for (int i = 0; i < n; ++i) flip[i] = b.at(i, i) < 0.0 ? -1 : 1;

    for (auto it = recorded.rbegin(); it != recorded.rend(); ++it) {
        double c = it->c, s = it->s;
        if (std::abs(s) < 1e-14 && c > 0.0) continue;  // numerically the identity
        // Embedded rotation G: out_i = c in_i - s in_l ; out_l = s in_i + c in_l,
        // with pending diagonal sign flips folded into the op inputs.
        std::array<double, 4> m = {c * flip[it->i], -s * flip[it->l], s * flip[it->i], c * flip[it->l]};
        flip[it->i] = 1;
        flip[it->l] = 1;
        plan.ops.push_back(make_op(it->i, it->l, m));
    }
    // Leftover flips on modes no kept rotation touches.
    std::vector<int> pending;
    for (int i = 0; i < n; ++i)
        if (flip[i] == -1) pending.push_back(i);
    for (std::size_t k = 0; k + 1 < pending.size(); k += 2)
        plan.ops.insert(plan.ops.begin(), make_op(pending[k], pending[k + 1], {-1.0, 0.0, 0.0, -1.0}));
    if (pending.size() % 2 == 1) {
        int i = pending.back();
        int partner = i == 0 ? 1 : 0;
        plan.ops.insert(plan.ops.begin(), make_op(i, partner, {-1.0, 0.0, 0.0, 1.0}));
    }
    return plan;
}

// Inserts attenuation so that every input mode sees the same total power
// transmission. Each original op gets the physical per-op transmission; extra
// zero-reflectivity attenuator ops keep interfering amplitudes equally damped
// and bring all outputs to a common eta, so the lossy circuit equals
// sqrt(eta) times the lossless one.
inline std::pair<CircuitPlan, double> equalize_attenuation(const CircuitPlan& plan, double per_op_transmission) {
    if (!(per_op_transmission > 0.0) || per_op_transmission > 1.0)
        throw std::domain_error("equalize_attenuation: transmission outside (0, 1]");
    if (per_op_transmission == 1.0) return {plan, 1.0};
    int n = plan.num_modes;
    CircuitPlan out;
    out.num_modes = n;
    std::vector<double> g(n, 0.0);  // accumulated attenuation, in -log power units

    auto attenuate_pair = [&](int a, int b, double amount) {
        if (amount <= 1e-15) return;
        out.ops.push_back(make_op(a, b, {1.0, 0.0, 0.0, 1.0}, std::exp(-amount)));
        g[a] += amount;
        g[b] += amount;
    };

    const double per_op = -std::log(per_op_transmission);
    for (const auto& op : plan.ops) {
        double mix = std::abs(op.sign_convention[1]);
        if (mix > 1e-14 && std::abs(g[op.mode_a] - g[op.mode_b]) > 1e-15) {
            // Bring the less-damped arm down to the other before interfering.
            int lo = g[op.mode_a] < g[op.mode_b] ? op.mode_a : op.mode_b;
            int hi = lo == op.mode_a ? op.mode_b : op.mode_a;
            double delta = g[hi] - g[lo];
            if (n < 3) throw std::logic_error("equalize_attenuation: unbalanced two-mode plan");
            // Partner absorbs the same attenuation; pick the least-damped
            // other mode, which needs it most anyway.
            int partner = -1;
            for (int m = 0; m < n; ++m)
                if (m != op.mode_a && m != op.mode_b && (partner < 0 || g[m] < g[partner])) partner = m;
            attenuate_pair(lo, partner, delta);
        }
        BeamSplitterOp damped = op;
        damped.transmission = op.transmission * per_op_transmission;
        out.ops.push_back(damped);
        double add = per_op - std::log(op.transmission);
        g[op.mode_a] += add;
        g[op.mode_b] += add;
    }

    // Final stage: attenuate everything to a common level using pair
    // attenuators. Feasibility over pairs needs max(need) <= sum(others);
    // lower the target if necessary.
    double target = *std::max_element(g.begin(), g.end());
    if (n >= 3) {
        for (int iter = 0; iter < 4 * n; ++iter) {
            std::vector<double> need(n);
            double sum = 0.0, mx = 0.0;
            for (int i = 0; i < n; ++i) {
                need[i] = target - g[i];
                sum += need[i];
                mx = std::max(mx, need[i]);
            }
            if (mx <= sum - mx + 1e-15) break;
            target += (2.0 * mx - sum) / (n - 2);
        }
    }
    std::vector<double> need(n);
    for (int i = 0; i < n; ++i) need[i] = target - g[i];
    if (n == 2 && std::abs(need[0] - need[1]) > 1e-12)
        throw std::logic_error("equalize_attenuation: unbalanced two-mode needs");
    for (int iter = 0; iter < 16 * n * n; ++iter) {
        // Two largest needs.
        int a = 0, bmax = -1;
        for (int i = 1; i < n; ++i)
            if (need[i] > need[a]) a = i;
        for (int i = 0; i < n; ++i)
            if (i != a && (bmax < 0 || need[i] > need[bmax])) bmax = i;
        if (bmax < 0 || need[a] <= 1e-13) break;
        double third = 0.0, total = 0.0;
        for (int i = 0; i < n; ++i) {
            total += need[i];
            if (i != a && i != bmax) third = std::max(third, need[i]);
        }
        double amount = std::min(need[bmax], 0.5 * total - third);
        if (amount <= 0.0) break;
        attenuate_pair(a, bmax, amount);
        need[a] -= amount;
        need[bmax] -= amount;
    }
    for (int i = 0; i < n; ++i)
        if (need[i] > 1e-10) throw std::logic_error("equalize_attenuation: pairing failed to converge");
    return {out, std::exp(-target)};
}

// Text format: one op per line,
// "mode_a mode_b power_reflectivity s00 s01 s10 s11 transmission".
inline void export_plan(const CircuitPlan& plan, std::ostream& os) {
    os.precision(17);
    os << plan.num_modes << "\n";
    for (const auto& op : plan.ops)
        os << op.mode_a << " " << op.mode_b << " " << op.power_reflectivity << " "
           << op.sign_convention[0] << " " << op.sign_convention[1] << " "
           << op.sign_convention[2] << " " << op.sign_convention[3] << " " << op.transmission << "\n";
}

inline CircuitPlan import_plan(std::istream& is) {
    CircuitPlan plan;
    if (!(is >> plan.num_modes) || plan.num_modes < 1) throw std::runtime_error("plan import: bad mode count");
    BeamSplitterOp op;
    while (is >> op.mode_a >> op.mode_b >> op.power_reflectivity >> op.sign_convention[0] >>
           op.sign_convention[1] >> op.sign_convention[2] >> op.sign_convention[3] >> op.transmission)
        plan.ops.push_back(op);
    return plan;
}

}  // namespace suprec
