// Shallow semantical embedding of quantified normal modal logics into
// classical higher-order logic.

#ifndef EP_MODAL_HPP
#define EP_MODAL_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ep/tptp.hpp"

namespace ep {

struct ModalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class S5Mode { Relational, Universal };

struct EmbedOptions {
  /// Universal replaces the accessibility relation of S5 by the total relation.
  S5Mode s5 = S5Mode::Relational;
};

struct EmbeddingOutput {
  /// Classical THF problem text.
  std::string text;
  /// Generated name -> its type and definition lines.
  std::map<std::string, std::string> provenance;
};

/// Relational properties required by the specified modalities, in emission
/// order, e.g. {"mreflexive", "meuclidean"} for S5.
std::vector<std::string> frameConditions(const LogicSpec& spec);

/// THF definition text of a frame property (mserial, mreflexive, ...).
std::string frameConditionDefinition(const std::string& property);

/// Lifted type in THF syntax: every $o becomes mworld > $o.
std::string liftedTypeText(Type t);

/// Quantifier-constant mangling of the lifted type, e.g. "_o__d_i_c_" for $i.
std::string mangleType(Type t);

/// Embeds a problem with a logic specification. Runs in the context of `p`;
/// the text must be parsed in a fresh context, since user symbols change type.
EmbeddingOutput embed(const Problem& p, const EmbedOptions& opts = {});

}  // namespace ep

#endif  // EP_MODAL_HPP
