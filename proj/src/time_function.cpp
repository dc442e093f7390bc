#include "lqdiv/time_function.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "lqdiv/error.hpp"

namespace lqdiv {

TimeFunction::TimeFunction(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
    if (pieces_.empty()) {
        throw ValidationError("time function table must not be empty");
    }
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
        if (!std::isfinite(pieces_[k].time) || !std::isfinite(pieces_[k].value)) {
            throw ValidationError("time function table entries must be finite");
        }
        if (k > 0 && !(pieces_[k].time > pieces_[k - 1].time)) {
            throw ValidationError("time function breakpoints must be strictly increasing");
        }
    }
}

double TimeFunction::operator()(double t) const noexcept {
    if (pieces_.size() == 1) return pieces_.front().value;
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t,
                               [](double x, const Piece& p) { return x < p.time; });
    if (it == pieces_.begin()) return pieces_.front().value;
    return std::prev(it)->value;
}

double TimeFunction::left_limit(double t) const noexcept {
    if (pieces_.size() == 1) return pieces_.front().value;
    auto it = std::lower_bound(pieces_.begin(), pieces_.end(), t,
                               [](const Piece& p, double x) { return p.time < x; });
    if (it == pieces_.begin()) return pieces_.front().value;
    return std::prev(it)->value;
}

double TimeFunction::min_value() const noexcept {
    return std::min_element(pieces_.begin(), pieces_.end(),
                            [](const Piece& a, const Piece& b) { return a.value < b.value; })
        ->value;
}

double TimeFunction::max_value() const noexcept {
    return std::max_element(pieces_.begin(), pieces_.end(),
                            [](const Piece& a, const Piece& b) { return a.value < b.value; })
        ->value;
}

namespace {

template <typename Op>
TimeFunction combine(const TimeFunction& a, const TimeFunction& b, Op op) {
    if (a.is_constant() && b.is_constant()) {
        return TimeFunction(op(a(0.0), b(0.0)));
    }
    std::set<double> times;
    for (const auto& p : a.pieces()) times.insert(p.time);
    for (const auto& p : b.pieces()) times.insert(p.time);
    std::vector<TimeFunction::Piece> out;
    out.reserve(times.size());
    for (double t : times) out.push_back({t, op(a(t), b(t))});
    return TimeFunction(std::move(out));
}

}  // namespace

TimeFunction TimeFunction::plus(const TimeFunction& other) const {
    return combine(*this, other, [](double x, double y) { return x + y; });
}

TimeFunction TimeFunction::times(const TimeFunction& other) const {
    return combine(*this, other, [](double x, double y) { return x * y; });
}

TimeFunction TimeFunction::scaled(double factor) const {
    auto out = pieces_;
    for (auto& p : out) p.value *= factor;
    return TimeFunction(std::move(out));
}

}  // namespace lqdiv
