#pragma once

#include <cassert>
#include <utility>
#include <variant>

namespace healthchain {

// Value-or-error return for operations whose failures are expected outcomes
// rather than exceptional conditions. E must be an error enum whose zero
// value means "no error".
template <typename T, typename E>
class Result {
 public:
  Result(T value) : state_(std::in_place_index<0>, std::move(value)) {}
  Result(E error) : state_(std::in_place_index<1>, error) { assert(error != E{}); }

  bool ok() const { return state_.index() == 0; }
  explicit operator bool() const { return ok(); }

  const T& value() const {
    assert(ok());
    return std::get<0>(state_);
  }
  T& value() {
    assert(ok());
    return std::get<0>(state_);
  }
  T take() {
    assert(ok());
    return std::move(std::get<0>(state_));
  }

  E error() const { return ok() ? E{} : std::get<1>(state_); }

 private:
  std::variant<T, E> state_;
};

}  // namespace healthchain
