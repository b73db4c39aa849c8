#ifndef BI_TESTS_ORACLE_HPP
#define BI_TESTS_ORACLE_HPP

#include "bi/syntax.hpp"

// Independent naive LBI prover used to cross-check decide(): backward search
// over coherent-equivalence classes with literal W/C and iterative deepening
// on the inference count. Deliberately shares no code with bi::expand.
namespace bi::oracle {

struct Options {
  int max_depth = 9;
  long max_nodes = 4'000'000;
};

enum class Answer { Proved, NotProved, Aborted };

Answer lbi_provable(const Sequent& s, const Options& opts = {});

}  // namespace bi::oracle

#endif
