#ifndef DEFUNG_VALUE_H
#define DEFUNG_VALUE_H

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <memory>
#include <string>
#include <utility>

namespace defung {

using BigInt = boost::multiprecision::cpp_int;

/// Runtime values: exact integers, the true constant, symbols, nil and pairs.
/// There is no false object: boolean false *is* nil, and anything other than
/// nil counts as true in test position.
class Value {
 public:
  enum class Kind : std::uint8_t { Nil, Bool, Int, Sym, Pair };

  Value() : kind_(Kind::Nil) {}

  static Value nil() { return Value(); }
  static Value truth() {
    Value v;
    v.kind_ = Kind::Bool;
    return v;
  }
  /// false normalizes to nil.
  static Value boolean(bool b) { return b ? truth() : nil(); }
  static Value integer(BigInt n) {
    Value v;
    v.kind_ = Kind::Int;
    v.int_ = std::make_shared<BigInt>(std::move(n));
    return v;
  }
  static Value integer(long long n) { return integer(BigInt(n)); }
  static Value symbol(std::string name) {
    Value v;
    v.kind_ = Kind::Sym;
    v.sym_ = std::make_shared<std::string>(std::move(name));
    return v;
  }
  static Value cons(Value car, Value cdr) {
    Value v;
    v.kind_ = Kind::Pair;
    v.pair_ = std::make_shared<std::pair<Value, Value>>(std::move(car), std::move(cdr));
    return v;
  }

  Kind kind() const { return kind_; }
  bool is_nil() const { return kind_ == Kind::Nil; }
  bool is_int() const { return kind_ == Kind::Int; }
  bool is_pair() const { return kind_ == Kind::Pair; }
  bool truthy() const { return kind_ != Kind::Nil; }

  const BigInt& as_int() const { return *int_; }
  const std::string& sym_name() const { return *sym_; }
  const Value& car() const { return pair_->first; }
  const Value& cdr() const { return pair_->second; }

  bool is_natural() const { return is_int() && as_int() >= 0; }

  friend bool operator==(const Value& a, const Value& b) {
    if (a.kind_ != b.kind_) return false;
    switch (a.kind_) {
      case Kind::Nil:
      case Kind::Bool:
        return true;
      case Kind::Int:
        return *a.int_ == *b.int_;
      case Kind::Sym:
        return *a.sym_ == *b.sym_;
      case Kind::Pair:
        return a.car() == b.car() && a.cdr() == b.cdr();
    }
    return false;
  }
  friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }

  std::string to_string() const;

 private:
  Kind kind_;
  std::shared_ptr<BigInt> int_;
  std::shared_ptr<std::string> sym_;
  std::shared_ptr<std::pair<Value, Value>> pair_;
};

}  // namespace defung

#endif
