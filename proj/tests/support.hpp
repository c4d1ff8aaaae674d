#pragma once

#include <gtest/gtest.h>

#include <stdexcept>
#include <string>

#include "gtlc/frontend.hpp"
#include "gtlc/printer.hpp"

namespace gtlc::testing {

inline constexpr const char* kRunning =
    "(module t1 (-> Int Int) (λ (x : Int) x))\n"
    "(module u1 (require t1) (t1 5))\n"
    "(module u2 (require t1) (λ (_) (t1 #f)))\n"
    "(module main (require u2) (u2 #f))\n";

inline ConPtr con(const std::string& text) {
  auto e = parse_con(text);
  if (!e) throw std::invalid_argument("test fixture does not parse: " + text);
  return *e;
}

inline SurfaceProgram program(const std::string& text) {
  auto p = load_program(text);
  if (!p) {
    std::string msg;
    for (const auto& d : p.diagnostics) msg += format(d, text) + "\n";
    throw std::invalid_argument("test fixture is not well-formed:\n" + msg);
  }
  return *p;
}

inline ::testing::AssertionResult alpha_equal(const ConPtr& a, const ConPtr& b) {
  if (structurally_equal(*a, *b)) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << "\n  " << print(*a) << "\nvs\n  " << print(*b);
}

}  // namespace gtlc::testing
