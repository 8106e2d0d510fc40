#pragma once

#include "fbasis/filters.hpp"
#include "fbasis/natset.hpp"
#include "fbasis/sequences.hpp"

#include <string>
#include <string_view>

namespace fbasis {

// Text grammars. Parsers throw ParseError with the byte offset of the
// failure; printers emit text that parses back to an equal object.
//
//   SET    := term ('|' term)*          term := factor ('&' factor)*
//   factor := '!' factor | '(' SET ')' | atom
//   atom   := finite{n,...} | cofinite{n,...} | residue(q,r) | range(lo,hi)
//           | range(lo,) | geom(b) | sampled(N){n,...}
//           | blocks(SEQ; SEQ; NUM; N)
//   SEQ    := pow(NUM,NUM) | powlog(NUM,NUM,NUM) | const(NUM)
//           | prefix[NUM,...]:SEQ | piece{SET => SEQ; ...}
//   NUM    := decimal | a/b | sqrt(NUM) | -NUM
//   FILTER := frechet | statistical | summable(SEQ) | trace(FILTER; SET)

SetExpr parse_set_expr(std::string_view text);
ScalarSeq parse_seq(std::string_view text);
FilterSpec parse_filter(std::string_view text, const Settings& settings = {});
Scalar parse_number(std::string_view text);

std::string to_text(const SetExpr& s);
std::string to_text(const ScalarSeq& a);
std::string to_text(const FilterSpec& f);

}  // namespace fbasis
