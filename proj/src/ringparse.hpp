#pragma once

#include <vector>

#include "novikit/groupring.hpp"
#include "text.hpp"

namespace novikit::detail {

// Stops at the first token that cannot continue the expression.
RingElement parse_ring_expr(text::Lexer& lex, const PresentationPtr& pres, Coefficients c);
std::vector<RingElement> parse_ring_row(text::Lexer& lex, const PresentationPtr& pres, Coefficients c);
std::vector<std::vector<RingElement>> parse_ring_rows(text::Lexer& lex, const PresentationPtr& pres,
                                                      Coefficients c);

}  // namespace novikit::detail
