#include "coblab/solver.hpp"

namespace coblab {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::solved: return "solved";
    case Verdict::not_coboundary: return "not_coboundary";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

}  // namespace coblab
