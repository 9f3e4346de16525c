// Copyright 2026 The zol Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "zol/bits.hpp"
#include "zol/error.hpp"

namespace zol {

using Complex = std::complex<double>;

/// Per-amplitude tolerance used for state comparisons and unitarity checks.
inline constexpr double kTolerance = 1e-9;

/// Outcomes whose Born probability falls below this are treated as impossible.
inline constexpr double kZeroProbability = 1e-12;

/// Register-bit cap for dense simulation. ZOL_MAX_BITS overrides the default.
inline int max_total_bits() {
    if (const char* env = std::getenv("ZOL_MAX_BITS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0 && v <= 40) {
            return static_cast<int>(v);
        }
    }
    return 24;
}

struct Register {
    std::string name;
    int width = 0;

    bool operator==(const Register&) const = default;
};

/// Ordered named registers. The basis index of a labeled tuple is the
/// concatenation of the register contents in layout order, first register most
/// significant.
class RegisterLayout {
   public:
    RegisterLayout() = default;
    explicit RegisterLayout(std::vector<Register> registers) : registers_(std::move(registers)) {
        for (size_t i = 0; i < registers_.size(); i++) {
            if (registers_[i].width < 1) {
                throw InvalidArgument("register '" + registers_[i].name + "' must have width >= 1");
            }
            for (size_t j = 0; j < i; j++) {
                if (registers_[j].name == registers_[i].name) {
                    throw InvalidArgument("duplicate register name '" + registers_[i].name + "'");
                }
            }
            total_bits_ += registers_[i].width;
        }
        int cap = max_total_bits();
        if (total_bits_ > cap) {
            throw CapExceeded("layout needs " + std::to_string(total_bits_) + " bits, cap is " +
                              std::to_string(cap) + " (set ZOL_MAX_BITS to raise it)");
        }
    }
    RegisterLayout(std::initializer_list<Register> registers) : RegisterLayout(std::vector<Register>(registers)) {}

    const std::vector<Register>& registers() const { return registers_; }
    int total_bits() const { return total_bits_; }
    uint64_t dimension() const { return uint64_t{1} << total_bits_; }

    bool has(std::string_view name) const {
        for (const auto& r : registers_) {
            if (r.name == name) {
                return true;
            }
        }
        return false;
    }

    size_t position(std::string_view name) const {
        for (size_t i = 0; i < registers_.size(); i++) {
            if (registers_[i].name == name) {
                return i;
            }
        }
        throw InvalidArgument("unknown register '" + std::string(name) + "'");
    }

    int width(std::string_view name) const { return registers_[position(name)].width; }

    /// Offset of the register's least significant bit within a basis index.
    int shift(std::string_view name) const {
        size_t p = position(name);
        int s = 0;
        for (size_t i = p + 1; i < registers_.size(); i++) {
            s += registers_[i].width;
        }
        return s;
    }

    uint64_t extract(uint64_t index, std::string_view name) const {
        return (index >> shift(name)) & low_mask(width(name));
    }

    uint64_t basis_index(const std::vector<BitString>& labels) const {
        if (labels.size() != registers_.size()) {
            throw InvalidArgument("expected " + std::to_string(registers_.size()) + " register labels, got " +
                                  std::to_string(labels.size()));
        }
        uint64_t index = 0;
        for (size_t i = 0; i < registers_.size(); i++) {
            if (labels[i].width() != registers_[i].width) {
                throw InvalidArgument("label '" + labels[i].str() + "' does not match width " +
                                      std::to_string(registers_[i].width) + " of register '" +
                                      registers_[i].name + "'");
            }
            index = (index << registers_[i].width) | labels[i].value();
        }
        return index;
    }

    std::vector<BitString> labels_of(uint64_t index) const {
        std::vector<BitString> out(registers_.size());
        for (size_t i = registers_.size(); i-- > 0;) {
            int w = registers_[i].width;
            out[i] = BitString(index & low_mask(w), w);
            index >>= w;
        }
        return out;
    }

    /// "|01⟩_B|00⟩_A"
    std::string ket(uint64_t index) const {
        std::string s;
        auto labels = labels_of(index);
        for (size_t i = 0; i < registers_.size(); i++) {
            s += "|" + labels[i].str() + "⟩_" + registers_[i].name;
        }
        return s;
    }

    bool operator==(const RegisterLayout&) const = default;

   private:
    std::vector<Register> registers_;
    int total_bits_ = 0;
};

/// Dense amplitude vector over a register layout.
class State {
   public:
    State() = default;
    State(RegisterLayout layout, std::vector<Complex> amplitudes)
        : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)) {
        if (amplitudes_.size() != layout_.dimension()) {
            throw InvalidArgument("amplitude vector length " + std::to_string(amplitudes_.size()) +
                                  " does not match layout dimension " + std::to_string(layout_.dimension()));
        }
    }

    static State zero(RegisterLayout layout) {
        std::vector<Complex> amps(layout.dimension());
        return State(std::move(layout), std::move(amps));
    }

    const RegisterLayout& layout() const { return layout_; }
    std::span<const Complex> amplitudes() const { return amplitudes_; }
    std::span<Complex> amplitudes() { return amplitudes_; }
    Complex amplitude(uint64_t index) const { return amplitudes_.at(index); }
    Complex& operator[](uint64_t index) { return amplitudes_[index]; }
    const Complex& operator[](uint64_t index) const { return amplitudes_[index]; }

    double norm() const {
        double s = 0;
        for (const auto& a : amplitudes_) {
            s += std::norm(a);
        }
        return std::sqrt(s);
    }

    State normalized() const {
        double n = norm();
        if (n == 0) {
            throw InvalidArgument("cannot normalize the zero vector");
        }
        State out = *this;
        for (auto& a : out.amplitudes_) {
            a /= n;
        }
        return out;
    }

    State& operator+=(const State& other) {
        if (!(other.layout_ == layout_)) {
            throw InvalidArgument("cannot add states with different layouts");
        }
        for (size_t i = 0; i < amplitudes_.size(); i++) {
            amplitudes_[i] += other.amplitudes_[i];
        }
        return *this;
    }

    State& operator*=(Complex c) {
        for (auto& a : amplitudes_) {
            a *= c;
        }
        return *this;
    }

    /// Basis indices with |amplitude| above `eps`, ascending.
    std::vector<uint64_t> support(double eps = 1e-12) const {
        std::vector<uint64_t> out;
        for (uint64_t i = 0; i < amplitudes_.size(); i++) {
            if (std::abs(amplitudes_[i]) > eps) {
                out.push_back(i);
            }
        }
        return out;
    }

   private:
    RegisterLayout layout_;
    std::vector<Complex> amplitudes_;
};

/// Largest per-amplitude difference between `a` and `b` after rotating `b`
/// by the global phase that best matches `a` at a's largest amplitude.
inline double phase_aligned_distance(const State& a, const State& b) {
    if (!(a.layout() == b.layout())) {
        throw InvalidArgument("cannot compare states with different layouts");
    }
    auto x = a.amplitudes();
    auto y = b.amplitudes();
    size_t pivot = 0;
    for (size_t i = 1; i < x.size(); i++) {
        if (std::abs(x[i]) > std::abs(x[pivot])) {
            pivot = i;
        }
    }
    Complex phase{1, 0};
    if (std::abs(x[pivot]) > 0 && std::abs(y[pivot]) > 0) {
        Complex r = x[pivot] / y[pivot];
        phase = r / std::abs(r);
    }
    double worst = 0;
    for (size_t i = 0; i < x.size(); i++) {
        worst = std::max(worst, std::abs(x[i] - phase * y[i]));
    }
    return worst;
}

inline bool approx_equal_up_to_phase(const State& a, const State& b, double tol = kTolerance) {
    return phase_aligned_distance(a, b) < tol;
}

/// Sharp state with one label per register, in layout order.
inline State make_basis_state(const RegisterLayout& layout, const std::vector<BitString>& labels) {
    State s = State::zero(layout);
    s[layout.basis_index(labels)] = 1;
    return s;
}

inline State make_basis_state(const RegisterLayout& layout, const std::vector<std::string>& labels) {
    std::vector<BitString> parsed;
    for (const auto& l : labels) {
        parsed.push_back(BitString::parse(l));
    }
    return make_basis_state(layout, parsed);
}

/// Equal positive amplitudes over `values` of register `name`; the other
/// registers are sharp at `rest` (layout order, skipping `name`; empty means
/// all zeros).
inline State uniform_superposition_over(const RegisterLayout& layout, std::string_view name,
                                   const std::vector<BitString>& values, const std::vector<BitString>& rest = {}) {
    size_t pos = layout.position(name);
    const auto& regs = layout.registers();
    std::vector<BitString> labels;
    size_t k = 0;
    for (size_t i = 0; i < regs.size(); i++) {
        if (i == pos) {
            labels.emplace_back(0, regs[i].width);
        } else if (rest.empty()) {
            labels.emplace_back(0, regs[i].width);
        } else {
            if (k >= rest.size()) {
                throw InvalidArgument("too few labels for the non-superposed registers");
            }
            labels.push_back(rest[k++]);
        }
    }
    if (!rest.empty() && k != rest.size()) {
        throw InvalidArgument("too many labels for the non-superposed registers");
    }
    if (values.empty()) {
        throw InvalidArgument("superposition over an empty set");
    }
    uint64_t base = layout.basis_index(labels);
    int shift = layout.shift(name);
    int width = regs[pos].width;
    State s = State::zero(layout);
    double amp = 1.0 / std::sqrt(static_cast<double>(values.size()));
    for (const auto& v : values) {
        if (v.width() != width) {
            throw InvalidArgument("value '" + v.str() + "' does not match width of register '" + std::string(name) + "'");
        }
        uint64_t idx = base | (v.value() << shift);
        if (s[idx] != Complex{}) {
            throw InvalidArgument("duplicate value '" + v.str() + "' in superposition");
        }
        s[idx] = amp;
    }
    return s;
}

/// Superposition over every value of the register.
inline State uniform_superposition(const RegisterLayout& layout, std::string_view name,
                                   const std::vector<BitString>& rest = {}) {
    int width = layout.width(name);
    std::vector<BitString> values;
    for (uint64_t v = 0; v < (uint64_t{1} << width); v++) {
        values.emplace_back(v, width);
    }
    return uniform_superposition_over(layout, name, values, rest);
}

// ---------------------------------------------------------------------------
// Gates and unitaries

struct HadamardGate {
    std::string reg;
};

/// 2|u⟩⟨u| - I on one register, u the uniform state.
struct DiffusionGate {
    std::string reg;
};

/// Diagonal gate with entry -1 where `flips(index)` holds, +1 elsewhere.
struct SignFlipGate {
    std::function<bool(uint64_t)> flips;
};

/// Basis permutation that is its own inverse.
struct InvolutionGate {
    std::function<uint64_t(uint64_t)> map;
};

/// Full-layout dense matrix, row-major.
struct DenseGate {
    std::vector<Complex> matrix;
};

struct Gate {
    std::string label;
    bool oracle_call = false;
    std::variant<HadamardGate, DiffusionGate, SignFlipGate, InvolutionGate, DenseGate> op;
};

/// A unitary on a register layout, kept as a gate sequence (first gate acts
/// first).
class Unitary {
   public:
    Unitary() = default;
    explicit Unitary(RegisterLayout layout) : layout_(std::move(layout)) {}

    const RegisterLayout& layout() const { return layout_; }
    const std::vector<Gate>& gates() const { return gates_; }

    Unitary& then(Gate g) {
        if (const auto* h = std::get_if<HadamardGate>(&g.op)) {
            layout_.position(h->reg);
        } else if (const auto* d = std::get_if<DiffusionGate>(&g.op)) {
            layout_.position(d->reg);
        } else if (const auto* m = std::get_if<DenseGate>(&g.op)) {
            if (m->matrix.size() != layout_.dimension() * layout_.dimension()) {
                throw InvalidArgument("dense gate size does not match layout");
            }
        }
        gates_.push_back(std::move(g));
        return *this;
    }

    /// `next` applied after this.
    Unitary then(const Unitary& next) const {
        if (!(next.layout_ == layout_)) {
            throw InvalidArgument("cannot compose unitaries with different layouts");
        }
        Unitary out = *this;
        out.gates_.insert(out.gates_.end(), next.gates_.begin(), next.gates_.end());
        return out;
    }

    /// Number of gates tagged as oracle calls.
    int query_count() const {
        int n = 0;
        for (const auto& g : gates_) {
            n += g.oracle_call ? 1 : 0;
        }
        return n;
    }

    /// Gate labels in application order, e.g. "H_A F I_A".
    std::string describe() const {
        std::string s;
        for (const auto& g : gates_) {
            if (!s.empty()) {
                s += ' ';
            }
            s += g.label;
        }
        return s;
    }

    /// Materialized matrix (row-major), for small layouts only.
    std::vector<Complex> to_matrix() const;

   private:
    RegisterLayout layout_;
    std::vector<Gate> gates_;
};

namespace detail {

inline void apply_hadamard(std::span<Complex> amps, int bit) {
    const double r = 1.0 / std::sqrt(2.0);
    uint64_t stride = uint64_t{1} << bit;
    for (uint64_t i = 0; i < amps.size(); i++) {
        if (i & stride) {
            continue;
        }
        Complex a = amps[i];
        Complex b = amps[i | stride];
        amps[i] = (a + b) * r;
        amps[i | stride] = (a - b) * r;
    }
}

inline void apply_gate(const RegisterLayout& layout, std::span<Complex> amps, const Gate& gate, bool adjoint) {
    std::visit(
        [&](const auto& op) {
            using T = std::decay_t<decltype(op)>;
            if constexpr (std::is_same_v<T, HadamardGate>) {
                int s = layout.shift(op.reg);
                for (int b = 0; b < layout.width(op.reg); b++) {
                    apply_hadamard(amps, s + b);
                }
            } else if constexpr (std::is_same_v<T, DiffusionGate>) {
                int s = layout.shift(op.reg);
                uint64_t count = uint64_t{1} << layout.width(op.reg);
                uint64_t field = (count - 1) << s;
                for (uint64_t base = 0; base < amps.size(); base++) {
                    if (base & field) {
                        continue;
                    }
                    Complex sum = 0;
                    for (uint64_t v = 0; v < count; v++) {
                        sum += amps[base | (v << s)];
                    }
                    Complex twice_mean = 2.0 * sum / static_cast<double>(count);
                    for (uint64_t v = 0; v < count; v++) {
                        auto& a = amps[base | (v << s)];
                        a = twice_mean - a;
                    }
                }
            } else if constexpr (std::is_same_v<T, SignFlipGate>) {
                for (uint64_t i = 0; i < amps.size(); i++) {
                    if (op.flips(i)) {
                        amps[i] = -amps[i];
                    }
                }
            } else if constexpr (std::is_same_v<T, InvolutionGate>) {
                for (uint64_t i = 0; i < amps.size(); i++) {
                    uint64_t j = op.map(i);
                    if (j > i) {
                        std::swap(amps[i], amps[j]);
                    }
                }
            } else {
                size_t dim = amps.size();
                std::vector<Complex> out(dim);
                for (size_t r = 0; r < dim; r++) {
                    Complex acc = 0;
                    for (size_t c = 0; c < dim; c++) {
                        acc += adjoint ? std::conj(op.matrix[c * dim + r]) * amps[c] : op.matrix[r * dim + c] * amps[c];
                    }
                    out[r] = acc;
                }
                std::copy(out.begin(), out.end(), amps.begin());
            }
        },
        gate.op);
}

}  // namespace detail

/// U|ψ⟩.
inline State apply(const State& state, const Unitary& u) {
    if (!(state.layout() == u.layout())) {
        throw InvalidArgument("state and unitary have different layouts");
    }
    State out = state;
    for (const auto& g : u.gates()) {
        detail::apply_gate(u.layout(), out.amplitudes(), g, false);
    }
    return out;
}

/// U†|ψ⟩.
inline State apply_adjoint(const State& state, const Unitary& u) {
    if (!(state.layout() == u.layout())) {
        throw InvalidArgument("state and unitary have different layouts");
    }
    State out = state;
    const auto& gates = u.gates();
    for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
        detail::apply_gate(u.layout(), out.amplitudes(), *it, true);
    }
    return out;
}

inline std::vector<Complex> Unitary::to_matrix() const {
    if (layout_.total_bits() > 12) {
        throw CapExceeded("matrix materialization limited to 12 bits");
    }
    uint64_t dim = layout_.dimension();
    std::vector<Complex> m(dim * dim);
    for (uint64_t c = 0; c < dim; c++) {
        State e = State::zero(layout_);
        e[c] = 1;
        State col = apply(e, *this);
        for (uint64_t r = 0; r < dim; r++) {
            m[r * dim + c] = col[r];
        }
    }
    return m;
}

/// max |(U†U - I)_ij|.
inline double unitarity_defect(const Unitary& u) {
    auto m = u.to_matrix();
    uint64_t dim = u.layout().dimension();
    double worst = 0;
    for (uint64_t i = 0; i < dim; i++) {
        for (uint64_t j = 0; j < dim; j++) {
            Complex acc = 0;
            for (uint64_t k = 0; k < dim; k++) {
                acc += std::conj(m[k * dim + i]) * m[k * dim + j];
            }
            worst = std::max(worst, std::abs(acc - (i == j ? Complex{1} : Complex{0})));
        }
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Measurement

struct MeasurementOutcome {
    std::string observable_id;
    BitString value;
    double probability = 0;
    State post_state;
};

/// Keeps the amplitudes whose register content satisfies `keep`; the result is
/// not renormalized.
inline State project(const State& state, std::string_view name, const std::function<bool(uint64_t)>& keep) {
    const auto& layout = state.layout();
    int s = layout.shift(name);
    uint64_t mask = low_mask(layout.width(name));
    State out = state;
    auto amps = out.amplitudes();
    for (uint64_t i = 0; i < amps.size(); i++) {
        if (!keep((i >> s) & mask)) {
            amps[i] = 0;
        }
    }
    return out;
}

/// Projects register `name` onto the given sharp value (not renormalized).
inline State project(const State& state, std::string_view name, const BitString& value) {
    if (value.width() != state.layout().width(name)) {
        throw InvalidArgument("projection value width does not match register '" + std::string(name) + "'");
    }
    return project(state, name, [&](uint64_t x) { return x == value.value(); });
}

namespace detail {

inline std::vector<MeasurementOutcome> measure_by(const State& state, std::string_view name, const std::string& id,
                                                  int outcome_bits, const std::function<uint64_t(uint64_t)>& key,
                                                  bool post_states = true) {
    const auto& layout = state.layout();
    int s = layout.shift(name);
    uint64_t mask = low_mask(layout.width(name));
    std::map<uint64_t, double> weight;
    auto amps = state.amplitudes();
    for (uint64_t i = 0; i < amps.size(); i++) {
        double p = std::norm(amps[i]);
        if (p > 0) {
            weight[key((i >> s) & mask)] += p;
        }
    }
    double total = 0;
    for (const auto& [k, w] : weight) {
        total += w;
    }
    if (total == 0) {
        throw InvalidArgument("cannot measure the zero vector");
    }
    std::vector<MeasurementOutcome> out;
    for (const auto& [k, w] : weight) {
        double p = w / total;
        if (p < kZeroProbability) {
            continue;
        }
        State post;
        if (post_states) {
            uint64_t target = k;
            post = project(state, name, [&](uint64_t x) { return key(x) == target; }).normalized();
        }
        out.push_back(MeasurementOutcome{id, BitString(k, outcome_bits), p, std::move(post)});
    }
    return out;
}

}  // namespace detail

/// Full projective measurement of a register; one outcome per value with
/// nonzero probability, ordered by value.
inline std::vector<MeasurementOutcome> measure(const State& state, std::string_view name) {
    int w = state.layout().width(name);
    return detail::measure_by(state, name, std::string(name), w, [](uint64_t x) { return x; });
}

/// Outcome probabilities of a full register measurement, without post-states.
inline std::vector<MeasurementOutcome> outcome_distribution(const State& state, std::string_view name) {
    int w = state.layout().width(name);
    return detail::measure_by(state, name, std::string(name), w, [](uint64_t x) { return x; }, false);
}

/// Coarse-grained measurement of the GF(2) image M x of the register content.
inline std::vector<MeasurementOutcome> measure_partial(const State& state, std::string_view name,
                                                       const Gf2Matrix& linmap) {
    int w = state.layout().width(name);
    if (linmap.cols() != w) {
        throw InvalidArgument("partial measurement has " + std::to_string(linmap.cols()) +
                              " columns but register '" + std::string(name) + "' has width " + std::to_string(w));
    }
    return detail::measure_by(state, name, std::string(name) + linmap.str(), linmap.num_rows(),
                              [&](uint64_t x) { return linmap.apply(x); });
}

/// Simple seedable source; sampling uses only the raw 64-bit stream so runs are
/// reproducible across standard libraries.
class Rng {
   public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

   private:
    std::mt19937_64 engine_;
};

inline const MeasurementOutcome& sample(const std::vector<MeasurementOutcome>& outcomes, Rng& rng) {
    if (outcomes.empty()) {
        throw InvalidArgument("no outcomes to sample from");
    }
    double u = rng.uniform();
    double acc = 0;
    for (const auto& o : outcomes) {
        acc += o.probability;
        if (u < acc) {
            return o;
        }
    }
    return outcomes.back();
}

// ---------------------------------------------------------------------------
// Reduced density operators

namespace detail {

/// Groups amplitudes by register value: value -> (rest index -> amplitude).
inline std::map<uint64_t, std::map<uint64_t, Complex>> split_register(const State& state, std::string_view name) {
    const auto& layout = state.layout();
    int s = layout.shift(name);
    uint64_t field = low_mask(layout.width(name)) << s;
    std::map<uint64_t, std::map<uint64_t, Complex>> rows;
    auto amps = state.amplitudes();
    for (uint64_t i = 0; i < amps.size(); i++) {
        if (amps[i] != Complex{}) {
            rows[(i & field) >> s][i & ~field] = amps[i];
        }
    }
    return rows;
}

inline Complex inner(const std::map<uint64_t, Complex>& x, const std::map<uint64_t, Complex>& y) {
    Complex acc = 0;
    for (const auto& [k, v] : x) {
        auto it = y.find(k);
        if (it != y.end()) {
            acc += v * std::conj(it->second);
        }
    }
    return acc;
}

}  // namespace detail

/// Max-entry distance between the reduced density operators of register
/// `name`. Works on the support of both states, so wide registers are fine as
/// long as few of their values are populated.
inline double reduced_density_distance(const State& a, const State& b, std::string_view name) {
    if (!(a.layout() == b.layout())) {
        throw InvalidArgument("cannot compare states with different layouts");
    }
    auto ra = detail::split_register(a, name);
    auto rb = detail::split_register(b, name);
    std::vector<uint64_t> values;
    for (const auto& [k, _] : ra) {
        values.push_back(k);
    }
    for (const auto& [k, _] : rb) {
        if (!ra.count(k)) {
            values.push_back(k);
        }
    }
    static const std::map<uint64_t, Complex> kEmpty;
    auto row = [](const auto& m, uint64_t k) -> const std::map<uint64_t, Complex>& {
        auto it = m.find(k);
        return it == m.end() ? kEmpty : it->second;
    };
    double worst = 0;
    for (uint64_t x : values) {
        for (uint64_t y : values) {
            Complex ea = detail::inner(row(ra, x), row(ra, y));
            Complex eb = detail::inner(row(rb, x), row(rb, y));
            worst = std::max(worst, std::abs(ea - eb));
        }
    }
    return worst;
}

}  // namespace zol
