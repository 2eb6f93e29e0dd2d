#pragma once

#include <array>
#include <string>
#include <string_view>

#include "fixread/errors.hpp"

namespace fixread {

// The eight keyword relations kept for analysis. VISITED is intentionally
// not representable.
enum class Relation {
  Award,
  Education,
  Employer,
  Founder,
  JobTitle,
  Nationality,
  PoliticalAffiliation,
  Wife,
};

inline constexpr int kRelationCount = 8;

inline constexpr std::array<Relation, kRelationCount> kAllRelations = {
    Relation::Award,       Relation::Education, Relation::Employer,
    Relation::Founder,     Relation::JobTitle,  Relation::Nationality,
    Relation::PoliticalAffiliation, Relation::Wife,
};

// Stable identifier used in files.
inline std::string_view relation_id(Relation r) {
  switch (r) {
    case Relation::Award: return "AWARD";
    case Relation::Education: return "EDUCATION";
    case Relation::Employer: return "EMPLOYER";
    case Relation::Founder: return "FOUNDER";
    case Relation::JobTitle: return "JOB_TITLE";
    case Relation::Nationality: return "NATIONALITY";
    case Relation::PoliticalAffiliation: return "POLITICAL_AFFILIATION";
    case Relation::Wife: return "WIFE";
  }
  return "";
}

// Human form used inside prompts ("JOB TITLE", not "JOB_TITLE").
inline std::string relation_keyword(Relation r) {
  std::string s{relation_id(r)};
  for (char& c : s) {
    if (c == '_') c = ' ';
  }
  return s;
}

// Accepts both the id and keyword spellings. Anything else (including
// VISITED) is an error.
inline Relation parse_relation(std::string_view s) {
  std::string norm{s};
  for (char& c : norm) {
    if (c == ' ') c = '_';
  }
  for (Relation r : kAllRelations) {
    if (norm == relation_id(r)) return r;
  }
  throw error("unknown relation: '" + std::string{s} + "'");
}

}  // namespace fixread
