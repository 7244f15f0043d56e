// SPDX-License-Identifier: Apache-2.0
// Shared helpers for the doctest suites.
#pragma once

#include <optional>
#include <string>
#include <utility>

#include "doctest.h"
#include "engage/error.hpp"

namespace engage::testing {

// Runs `fn` and returns the Error it threw, or nullopt when it returned.
template <class Fn>
std::optional<Error> caught(Fn&& fn) {
  try {
    std::forward<Fn>(fn)();
  } catch (const Error& e) {
    return e;
  }
  return std::nullopt;
}

}  // namespace engage::testing

#define CHECK_ERRC(expr, errc)                                              \
  do {                                                                      \
    auto engage_err_ = ::engage::testing::caught([&] { (void)(expr); });    \
    CHECK_MESSAGE(engage_err_.has_value(), "expected " #errc " from " #expr); \
    if (engage_err_) CHECK(engage_err_->code() == (errc));                  \
  } while (0)

#define CHECK_ERRC_FIELD(expr, errc, field_name)                            \
  do {                                                                      \
    auto engage_err_ = ::engage::testing::caught([&] { (void)(expr); });    \
    CHECK_MESSAGE(engage_err_.has_value(), "expected " #errc " from " #expr); \
    if (engage_err_) {                                                      \
      CHECK(engage_err_->code() == (errc));                                 \
      CHECK(engage_err_->field() == (field_name));                          \
    }                                                                       \
  } while (0)
