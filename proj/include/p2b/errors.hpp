#pragma once

#include <stdexcept>
#include <string>

namespace p2b {

// Base of every typed error in the library. The what() string always starts
// with the error's class name so CLI output identifies failures precisely.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define P2B_DEFINE_ERROR(Name)                                              \
    struct Name : Error {                                                   \
        explicit Name(const std::string& detail)                            \
            : Error(std::string(#Name) + ": " + detail) {}                  \
    }

// corpus
P2B_DEFINE_ERROR(MissingFile);
P2B_DEFINE_ERROR(MalformedManifest);
P2B_DEFINE_ERROR(EmptyCorpus);

// checklist
P2B_DEFINE_ERROR(MalformedChecklist);
P2B_DEFINE_ERROR(UnknownQuestion);

// providers
P2B_DEFINE_ERROR(ConfigError);
P2B_DEFINE_ERROR(BudgetExceeded);
P2B_DEFINE_ERROR(ProviderUnavailable);
P2B_DEFINE_ERROR(ProviderRefusal);
P2B_DEFINE_ERROR(EmptyInputText);

// direct assessment
P2B_DEFINE_ERROR(BudgetTooSmall);
P2B_DEFINE_ERROR(UnparseableScore);
P2B_DEFINE_ERROR(OutOfRangeScore);
P2B_DEFINE_ERROR(AllChunksFailed);

// retrieval
P2B_DEFINE_ERROR(DimensionMismatch);
P2B_DEFINE_ERROR(NoParagraphs);
P2B_DEFINE_ERROR(EmptyAnswerList);
P2B_DEFINE_ERROR(UnparseableVerdict);

// dox
P2B_DEFINE_ERROR(BadThreshold);

// evaluation
P2B_DEFINE_ERROR(MalformedLabelFile);
P2B_DEFINE_ERROR(EvenLabelCount);
P2B_DEFINE_ERROR(KeyMismatch);
P2B_DEFINE_ERROR(EmptySample);
P2B_DEFINE_ERROR(OutOfRangeU);
P2B_DEFINE_ERROR(EmptyList);

#undef P2B_DEFINE_ERROR

}  // namespace p2b
