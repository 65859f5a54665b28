#pragma once

#include <string>

#include "karamata/config.hpp"
#include "karamata/expr.hpp"

namespace karamata {
namespace dsl {

/// Recognized grammar (whitespace-insensitive):
///   expr := "one" | "const(" num ")" | "logp" | "loglogp" | "expsqrtlog"
///         | "pow(" expr "," num ")" | "add(" expr "," expr ")"
///         | "mul(" expr "," expr ")" | "div(" expr "," expr ")"
///         | "recip(" expr ")" | "truncl(" expr ")" | "truncr(" expr ")"
///         | "shift(" expr "," num ")" | "tilde(" expr ")" | "hat(" expr ")"
///         | "tildesup(" expr ")" | "hatsup(" expr ")"
///         | "winc(" expr "," num ")" | "wdec(" expr "," num ")"
/// winc/wdec are the monotone witness integrals. Throws ParseError with
/// line/column and the expected-token set.
Expr parse(const std::string& src, const CheckConfig& cfg = {});

/// Canonical rendering; parse(print(e)) is structurally identical to e.
std::string print(const Expr& e);

}  // namespace dsl
}  // namespace karamata
