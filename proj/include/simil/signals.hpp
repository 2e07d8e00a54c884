#pragma once

#include "simil/rational.hpp"

#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace simil {

inline constexpr std::size_t kMaxSignals = 10;
inline constexpr std::size_t kMaxPlayers = 8;

/// Subset of a signal space, stored as a bitmask over signal indices.
class SignalSet {
 public:
  constexpr SignalSet() = default;
  constexpr explicit SignalSet(std::uint32_t bits) : bits_(bits) {}

  static constexpr SignalSet single(std::size_t s) { return SignalSet(1u << s); }
  static constexpr SignalSet all(std::size_t n) { return SignalSet((1u << n) - 1u); }
  /// {lo, lo+1, ..., hi}, inclusive.
  static constexpr SignalSet interval(std::size_t lo, std::size_t hi) {
    return SignalSet(((1u << (hi + 1)) - 1u) & ~((1u << lo) - 1u));
  }
  /// Upper contour set of index i within a space of size n.
  static constexpr SignalSet upper(std::size_t i, std::size_t n) { return interval(i, n - 1); }
  /// Lower contour set of index i.
  static constexpr SignalSet lower(std::size_t i) { return interval(0, i); }

  constexpr bool contains(std::size_t s) const { return (bits_ >> s) & 1u; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr std::uint32_t bits() const { return bits_; }

  constexpr SignalSet with(std::size_t s) const { return SignalSet(bits_ | (1u << s)); }
  constexpr SignalSet without(std::size_t s) const { return SignalSet(bits_ & ~(1u << s)); }
  constexpr SignalSet complement(std::size_t n) const { return SignalSet(~bits_ & all(n).bits_); }
  constexpr bool subset_of(SignalSet other) const { return (bits_ & ~other.bits_) == 0; }

  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    for (std::size_t s = 0; s < 32; ++s)
      if (contains(s)) out.push_back(s);
    return out;
  }

  friend constexpr bool operator==(SignalSet, SignalSet) = default;
  friend constexpr auto operator<=>(SignalSet, SignalSet) = default;
  friend constexpr SignalSet operator|(SignalSet a, SignalSet b) { return SignalSet(a.bits_ | b.bits_); }
  friend constexpr SignalSet operator&(SignalSet a, SignalSet b) { return SignalSet(a.bits_ & b.bits_); }

 private:
  std::uint32_t bits_ = 0;
};

/// Ordered, finite signal space. Values are strictly increasing.
class SignalSpace {
 public:
  struct Signal {
    std::string label;
    Rational value;
    friend bool operator==(const Signal&, const Signal&) = default;
  };

  SignalSpace() = default;

  explicit SignalSpace(std::vector<Signal> signals) : signals_(std::move(signals)) {
    if (signals_.empty()) throw std::invalid_argument("signal space must not be empty");
    if (signals_.size() > kMaxSignals)
      throw std::invalid_argument("signal space larger than " + std::to_string(kMaxSignals));
    for (std::size_t i = 1; i < signals_.size(); ++i) {
      if (!(signals_[i - 1].value < signals_[i].value))
        throw std::invalid_argument("signal values must be strictly increasing");
    }
    for (std::size_t i = 0; i < signals_.size(); ++i)
      for (std::size_t j = i + 1; j < signals_.size(); ++j)
        if (signals_[i].label == signals_[j].label)
          throw std::invalid_argument("duplicate signal label '" + signals_[i].label + "'");
  }

  /// Signals labelled by their values, e.g. {"0","1"} or {"-1/2","1/2"}.
  static SignalSpace from_values(const std::vector<Rational>& values) {
    std::vector<Signal> sigs;
    for (const auto& v : values) {
      std::string label = denominator(v) == 1 ? numerator(v).str() : to_string(v);
      sigs.push_back({std::move(label), v});
    }
    return SignalSpace(std::move(sigs));
  }

  /// 0, 1, ..., n-1.
  static SignalSpace integers(std::size_t n, std::int64_t first = 0) {
    std::vector<Rational> values;
    for (std::size_t i = 0; i < n; ++i) values.emplace_back(first + static_cast<std::int64_t>(i));
    return from_values(values);
  }

  std::size_t size() const { return signals_.size(); }
  const Signal& operator[](std::size_t i) const { return signals_.at(i); }
  const std::vector<Signal>& signals() const { return signals_; }
  const std::string& label(std::size_t i) const { return signals_.at(i).label; }
  const Rational& value(std::size_t i) const { return signals_.at(i).value; }
  SignalSet all() const { return SignalSet::all(size()); }

  std::optional<std::size_t> find(const std::string& label) const {
    for (std::size_t i = 0; i < signals_.size(); ++i)
      if (signals_[i].label == label) return i;
    return std::nullopt;
  }
  std::size_t index_of(const std::string& label) const {
    if (auto i = find(label)) return *i;
    throw std::invalid_argument("unknown signal label '" + label + "'");
  }

  std::string describe(SignalSet set) const {
    std::string out = "{";
    bool first = true;
    for (auto s : set.indices()) {
      if (!first) out += ", ";
      out += label(s);
      first = false;
    }
    return out + "}";
  }

  friend bool operator==(const SignalSpace&, const SignalSpace&) = default;

 private:
  std::vector<Signal> signals_;
};

/// Calls f(K) for every subset K of {0..n-1} that contains s, in
/// increasing bitmask order.
template <typename F>
void for_each_set_containing(std::size_t n, std::size_t s, F&& f) {
  const std::uint32_t limit = 1u << n;
  for (std::uint32_t bits = 0; bits < limit; ++bits) {
    if ((bits >> s) & 1u) f(SignalSet(bits));
  }
}

}  // namespace simil
