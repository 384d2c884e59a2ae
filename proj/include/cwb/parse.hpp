#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cwb/batheory.hpp"
#include "cwb/cformula.hpp"
#include "cwb/cstar.hpp"
#include "cwb/fo.hpp"
#include "cwb/ordinal.hpp"
#include "cwb/saturation.hpp"

// Text grammars. Every parser consumes the whole input and throws ParseError
// with a byte offset on failure.
namespace cwb {

// `0`, naturals, `w`, `w^<exp>`, `*<nat>`, `+` between terms; an exponent is
// a natural, `w` (optionally raised again) or a parenthesized ordinal. Terms
// in any order are normalized by ordinal addition.
Ordinal parse_ordinal(std::string_view text);

// Infix grammar printed by to_string(FoFormula): forall/exists x. body,
// !, &, |, -> and atoms t = t, t <= t, t != t over terms built from
// variables, 0, 1, /\, \/ and ~. Variables must be bound or listed in `free`.
FoFormula parse_fo_formula(std::string_view text, const std::vector<std::string>& free = {});

// S-expressions printed by to_string(CFormula). Variables must be bound or
// listed in `free`; `i` is the imaginary unit.
CFormula parse_cformula(std::string_view text, const std::vector<std::string>& free = {});

// trivial, finite(n), fincof, P(omega), P(omega)/fin, free, intalg(<ordinal>),
// prod(d, d, ...).
BADescriptor parse_descriptor(std::string_view text);

// 1, -0.5, 2i, -i, 0.5+0.25i, ...
Complex parse_complex(std::string_view text);
std::string format_complex(Complex z);
// Comma-separated values, optionally in brackets: "0, 1, 2" or "[0, i]".
CElement parse_element(std::string_view text);
std::string format_element(const CElement& e);

// top, bot, or prefixes over {0,1} joined by |.
CylinderSet parse_cylinder(std::string_view text);

// norm(<poly>) in <target>. A poly is a sum of terms `coeff`, `coeff*xK`,
// `coeff*xK^*`, `xK`, `xK^*`, where coeff is a real, `i`, a parenthesized
// complex, or a bracketed element; a target is a union (`u`) of `{a}` and
// `[a, b]`. Scalars are broadcast to `points` coordinates.
TypeCondition parse_type_condition(std::string_view text, std::size_t points);

}  // namespace cwb
