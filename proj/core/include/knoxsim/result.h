// Copyright The knoxsim Authors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#ifndef KNOXSIM_RESULT_H_
#define KNOXSIM_RESULT_H_

#include <cassert>
#include <utility>
#include <variant>

namespace knoxsim {

// Error half of a Result. Construct with Fail(e).
template <typename E>
struct Failure {
  E error;
};

template <typename E>
Failure<E> Fail(E error) {
  return Failure<E>{std::move(error)};
}

// Value-or-error return type used by every fallible operation. Errors are
// domain enums, never exceptions.
template <typename T, typename E>
class [[nodiscard]] Result {
 public:
  using value_type = T;
  using error_type = E;

  Result(T value) : storage_(std::in_place_index<0>, std::move(value)) {}
  Result(Failure<E> failure)
      : storage_(std::in_place_index<1>, std::move(failure.error)) {}

  bool ok() const { return storage_.index() == 0; }
  explicit operator bool() const { return ok(); }

  T& value() & {
    assert(ok());
    return std::get<0>(storage_);
  }
  const T& value() const& {
    assert(ok());
    return std::get<0>(storage_);
  }
  T&& value() && {
    assert(ok());
    return std::get<0>(std::move(storage_));
  }

  const E& error() const {
    assert(!ok());
    return std::get<1>(storage_);
  }

  T& operator*() & { return value(); }
  const T& operator*() const& { return value(); }
  T* operator->() { return &value(); }
  const T* operator->() const { return &value(); }

 private:
  std::variant<T, E> storage_;
};

// Result for operations that produce no value on success.
template <typename E>
using Status = Result<std::monostate, E>;

inline constexpr std::monostate Ok() { return {}; }

}  // namespace knoxsim

#endif  // KNOXSIM_RESULT_H_
