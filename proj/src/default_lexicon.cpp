#include <sstream>

#include "contrastgen/lexicon.hpp"
#include "default_lexicon_data.hpp"

namespace contrastgen {

const Lexicon& default_lexicon() {
  static const Lexicon lex = [] {
    std::istringstream in{std::string(detail::kDefaultLexiconJson)};
    return load_lexicon(in);
  }();
  return lex;
}

}  // namespace contrastgen
