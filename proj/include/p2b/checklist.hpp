#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "p2b/corpus.hpp"
#include "p2b/errors.hpp"

namespace p2b {

struct ChecklistQuestion {
    std::string id;           // "Q1".."Q19", "-SE" suffix where texts diverge
    std::string closed_text;  // yes/no form, scored by the direct strategy
    std::string open_text;    // direct-question form, used for retrieval
    std::vector<PlatformType> applies_to;
    std::string legal_source;
    bool in_survey_subset = false;
    // All open forms except Q1's are editorial conversions of the closed
    // form; the flag records which ones.
    bool open_text_derived = true;

    bool applies(PlatformType t) const;
};

// The question bank. Loaded once from the data file and validated
// aggressively: every report denominator in the pipeline depends on the
// 17/19 split being exact.
class Checklist {
public:
    static Checklist load(const std::filesystem::path& path);

    const std::vector<ChecklistQuestion>& bank() const { return bank_; }

    // Stable bank order, filtered to the platform type.
    std::vector<ChecklistQuestion> questions_for(PlatformType t) const;

    const ChecklistQuestion& by_id(const std::string& id) const;

    // Stored open form of a bank question; UnknownQuestion otherwise.
    const std::string& open_form(const std::string& id) const;

private:
    std::vector<ChecklistQuestion> bank_;
};

}  // namespace p2b
