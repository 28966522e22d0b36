#include "mriofp/error.hpp"

namespace mriofp {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::NegativeEntry: return "NegativeEntry";
        case ErrorKind::UnproductiveEconomy: return "UnproductiveEconomy";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::UnitMismatch: return "UnitMismatch";
        case ErrorKind::UnknownRegion: return "UnknownRegion";
        case ErrorKind::UnknownCategory: return "UnknownCategory";
        case ErrorKind::UnknownSector: return "UnknownSector";
        case ErrorKind::UnsortedNonzeroDemand: return "UnsortedNonzeroDemand";
        case ErrorKind::ZeroBaselineNonzeroTarget: return "ZeroBaselineNonzeroTarget";
        case ErrorKind::ZeroBaseNonzeroTarget: return "ZeroBaseNonzeroTarget";
        case ErrorKind::EmptyCofogTable: return "EmptyCofogTable";
        case ErrorKind::MissingHouseholdType: return "MissingHouseholdType";
        case ErrorKind::MissingStressorLabel: return "MissingStressorLabel";
        case ErrorKind::UnmappedSector: return "UnmappedSector";
        case ErrorKind::UnflaggedStressor: return "UnflaggedStressor";
        case ErrorKind::ZeroEmbeddedBase: return "ZeroEmbeddedBase";
        case ErrorKind::UnknownScenario: return "UnknownScenario";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

}  // namespace mriofp
