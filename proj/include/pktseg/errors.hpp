#ifndef PKTSEG_ERRORS_HPP
#define PKTSEG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pktseg {

/// Base class for every failure raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define PKTSEG_ERROR_TYPE(NAME)        \
    struct NAME : ::pktseg::Error {    \
        using ::pktseg::Error::Error;  \
    }

// volume-io
PKTSEG_ERROR_TYPE(MissingFile);
PKTSEG_ERROR_TYPE(HeaderMismatch);
PKTSEG_ERROR_TYPE(NonFiniteVoxel);
PKTSEG_ERROR_TYPE(IoFailure);
PKTSEG_ERROR_TYPE(ParseError);
PKTSEG_ERROR_TYPE(DuplicateStudyId);
PKTSEG_ERROR_TYPE(MissingSequenceFile);

// preprocess
PKTSEG_ERROR_TYPE(ZeroVariance);
PKTSEG_ERROR_TYPE(PatchLargerThanVolume);
PKTSEG_ERROR_TYPE(MissingSequence);
PKTSEG_ERROR_TYPE(ChannelMismatch);

// nn
PKTSEG_ERROR_TYPE(ShapeMismatch);
PKTSEG_ERROR_TYPE(DegenerateBatch);
PKTSEG_ERROR_TYPE(OddDimension);
PKTSEG_ERROR_TYPE(IndivisibleDims);
PKTSEG_ERROR_TYPE(NonFiniteLoss);

// metrics
PKTSEG_ERROR_TYPE(GridMismatch);
PKTSEG_ERROR_TYPE(EmptyDenominator);
PKTSEG_ERROR_TYPE(EmptyMask);
PKTSEG_ERROR_TYPE(TooFewPairs);
PKTSEG_ERROR_TYPE(CaseSetMismatch);

// phantom
PKTSEG_ERROR_TYPE(GeometryOverflow);

// harness
PKTSEG_ERROR_TYPE(DatasetTooSmall);
PKTSEG_ERROR_TYPE(CheckpointMismatch);
PKTSEG_ERROR_TYPE(MissingDependency);
PKTSEG_ERROR_TYPE(ConfigParseError);
PKTSEG_ERROR_TYPE(UnknownSubcommand);

#undef PKTSEG_ERROR_TYPE

}  // namespace pktseg

#endif  // PKTSEG_ERRORS_HPP
