#include "gossipsim/params.hpp"

namespace gossipsim {

const char* variant_name(ProtocolVariant v) {
  switch (v) {
    case ProtocolVariant::V1_1: return "v1.1";
    case ProtocolVariant::V1_2: return "v1.2";
    case ProtocolVariant::V1_4: return "v1.4";
    case ProtocolVariant::Reduced: return "reduced";
  }
  return "?";
}

ProtocolVariant variant_from_string(const std::string& s) {
  if (s == "v1.1" || s == "V1_1") return ProtocolVariant::V1_1;
  if (s == "v1.2" || s == "V1_2") return ProtocolVariant::V1_2;
  if (s == "v1.4" || s == "V1_4") return ProtocolVariant::V1_4;
  if (s == "reduced" || s == "REDUCED") return ProtocolVariant::Reduced;
  throw std::invalid_argument("unknown variant '" + s +
                              "' (expected v1.1, v1.2, v1.4 or reduced)");
}

const char* adversary_name(AdversaryKind k) {
  switch (k) {
    case AdversaryKind::None: return "none";
    case AdversaryKind::StallingPreamble: return "stalling_preamble";
    case AdversaryKind::IwantSilent: return "iwant_silent";
  }
  return "?";
}

AdversaryKind adversary_from_string(const std::string& s) {
  if (s == "none" || s.empty()) return AdversaryKind::None;
  if (s == "stalling_preamble") return AdversaryKind::StallingPreamble;
  if (s == "iwant_silent") return AdversaryKind::IwantSilent;
  throw std::invalid_argument(
      "unknown adversary kind '" + s +
      "' (expected none, stalling_preamble or iwant_silent)");
}

}  // namespace gossipsim
