#pragma once

#include <stdexcept>
#include <string>

namespace qpskew {

enum class Errc {
  DivisionByZero,
  ConductorTooLarge,
  ConductorTooSmall,
  ParseError,
  NotASubgroup,
  QuiverMismatch,
  NotCyclic,
  InvalidAction,
  NotMonomialOnStabilizer,
  InvalidChoice,
  ContextMismatch,
  NotARepresentative,
  NotInImage,
  NotInOrbitOfDistinguished,
  NotInvariant,
  VerificationFailed,
  InvalidInstance,
};

struct Error : std::runtime_error {
  Errc code;
  Error(Errc c, const std::string& what) : std::runtime_error(what), code(c) {}
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::ConductorTooLarge: return "ConductorTooLarge";
    case Errc::ConductorTooSmall: return "ConductorTooSmall";
    case Errc::ParseError: return "ParseError";
    case Errc::NotASubgroup: return "NotASubgroup";
    case Errc::QuiverMismatch: return "QuiverMismatch";
    case Errc::NotCyclic: return "NotCyclic";
    case Errc::InvalidAction: return "InvalidAction";
    case Errc::NotMonomialOnStabilizer: return "NotMonomialOnStabilizer";
    case Errc::InvalidChoice: return "InvalidChoice";
    case Errc::ContextMismatch: return "ContextMismatch";
    case Errc::NotARepresentative: return "NotARepresentative";
    case Errc::NotInImage: return "NotInImage";
    case Errc::NotInOrbitOfDistinguished: return "NotInOrbitOfDistinguished";
    case Errc::NotInvariant: return "NotInvariant";
    case Errc::VerificationFailed: return "VerificationFailed";
    case Errc::InvalidInstance: return "InvalidInstance";
  }
  return "Unknown";
}

}  // namespace qpskew
