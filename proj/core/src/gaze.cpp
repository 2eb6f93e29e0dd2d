#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include <boost/math/distributions/students_t.hpp>

#include "fixread/analysis.hpp"
#include "fixread/csv.hpp"
#include "fixread/errors.hpp"

namespace fixread::analysis {
namespace {

struct SubjectGroupValues {
  std::optional<double> fix_incl, fix_excl, gd, trt, ffd, sfd, gopast;
};

MeanSd aggregate(const std::vector<double>& values) {
  MeanSd out;
  out.n = static_cast<int>(values.size());
  if (values.empty()) return out;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  out.mean = mean;
  out.sd = values.size() > 1 ? std::sqrt(ss / static_cast<double>(values.size() - 1)) : 0.0;
  return out;
}

std::string format_p(const std::optional<double>& p) {
  if (!p) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4e", *p);
  return buf;
}

}  // namespace

double paired_pvalue(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw error("paired_pvalue: unpaired inputs");
  }
  const std::size_t n = a.size();
  if (n < 3) {
    throw error("paired_pvalue: need at least 3 pairs");
  }
  std::vector<double> diff(n);
  for (std::size_t i = 0; i < n; ++i) diff[i] = a[i] - b[i];

  double mean = 0.0;
  for (double d : diff) mean += d;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double d : diff) ss += (d - mean) * (d - mean);

  if (ss == 0.0) {
    if (mean == 0.0) return 1.0;
    throw error("paired_pvalue: zero-variance nonzero differences");
  }
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  const double t = mean / (sd / std::sqrt(static_cast<double>(n)));
  boost::math::students_t_distribution<double> dist(static_cast<double>(n - 1));
  const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
  return std::min(p, 1.0);
}

GazeStatsTable fixation_stats(const std::vector<SessionBundle>& bundles,
                              const std::vector<WordGrouping>& groupings) {
  if (bundles.empty()) {
    throw error("fixation_stats: no bundles");
  }

  GazeStatsTable table;
  {
    // corpus-level word counts come straight from the grouping set
    std::size_t hrw_words = 0, lrw_words = 0;
    for (const auto& g : groupings) {
      hrw_words += g.hrw.size();
      lrw_words += g.lrw.size();
    }
    table.hrw.word_count = static_cast<int>(hrw_words);
    table.lrw.word_count = static_cast<int>(lrw_words);
    table.total_words = static_cast<int>(hrw_words + lrw_words);
  }

  // per subject, per group
  std::vector<SubjectGroupValues> per_subject[2];
  for (const auto& bundle : bundles) {
    std::map<std::pair<SentenceId, int>, const FixationRecord*> fix;
    for (const auto& f : bundle.fixations) {
      fix[{f.sentence_id, f.token_index}] = &f;
    }
    std::set<SentenceId> sentence_ids;
    for (const auto& s : bundle.sentences) sentence_ids.insert(s.sentence_id);

    for (int group = 0; group < 2; ++group) {
      long total_fixations = 0;
      long words = 0;
      long fixated_words = 0;
      std::vector<double> gd, trt, ffd, sfd, gopast;
      for (const auto& g : groupings) {
        if (!sentence_ids.count(g.sentence_id)) {
          throw error("fixation_stats: grouping for sentence " +
                      std::to_string(g.sentence_id) + " does not resolve in bundle " +
                      bundle.subject_id);
        }
        const auto& indices = group == 0 ? g.hrw : g.lrw;
        for (int idx : indices) {
          ++words;
          auto it = fix.find({g.sentence_id, idx});
          const FixationRecord* rec = it == fix.end() ? nullptr : it->second;
          const int count = rec ? rec->fixation_count : 0;
          total_fixations += count;
          if (count > 0) ++fixated_words;
          if (rec) {
            if (rec->gd_ms) gd.push_back(*rec->gd_ms);
            if (rec->trt_ms) trt.push_back(*rec->trt_ms);
            if (rec->ffd_ms) ffd.push_back(*rec->ffd_ms);
            if (rec->sfd_ms) sfd.push_back(*rec->sfd_ms);
            if (rec->gopast_ms) gopast.push_back(*rec->gopast_ms);
          }
        }
      }

      SubjectGroupValues v;
      if (words > 0) {
        v.fix_incl = static_cast<double>(total_fixations) / static_cast<double>(words);
      } else {
        table.notes.push_back(bundle.subject_id + ": empty " +
                              (group == 0 ? std::string{"HRW"} : std::string{"LRW"}) +
                              " group, excluded");
      }
      if (fixated_words > 0) {
        v.fix_excl =
            static_cast<double>(total_fixations) / static_cast<double>(fixated_words);
      } else if (words > 0) {
        table.notes.push_back(bundle.subject_id + ": no fixated words in " +
                              (group == 0 ? std::string{"HRW"} : std::string{"LRW"}) +
                              ", excluded from excl./duration measures");
      }
      auto mean_of = [](const std::vector<double>& xs) -> std::optional<double> {
        if (xs.empty()) return std::nullopt;
        double m = 0.0;
        for (double x : xs) m += x;
        return m / static_cast<double>(xs.size());
      };
      v.gd = mean_of(gd);
      v.trt = mean_of(trt);
      v.ffd = mean_of(ffd);
      v.sfd = mean_of(sfd);
      v.gopast = mean_of(gopast);
      per_subject[group].push_back(v);
    }
  }

  auto collect = [&](int group, auto member) {
    std::vector<double> out;
    for (const auto& v : per_subject[group]) {
      if (v.*member) out.push_back(*(v.*member));
    }
    return out;
  };
  auto fill_group = [&](int group, GroupGazeStats& stats) {
    stats.fixations_incl_zero = aggregate(collect(group, &SubjectGroupValues::fix_incl));
    stats.fixations_excl_zero = aggregate(collect(group, &SubjectGroupValues::fix_excl));
    stats.gd_ms = aggregate(collect(group, &SubjectGroupValues::gd));
    stats.trt_ms = aggregate(collect(group, &SubjectGroupValues::trt));
    stats.ffd_ms = aggregate(collect(group, &SubjectGroupValues::ffd));
    stats.sfd_ms = aggregate(collect(group, &SubjectGroupValues::sfd));
    stats.gopast_ms = aggregate(collect(group, &SubjectGroupValues::gopast));
  };
  fill_group(0, table.hrw);
  fill_group(1, table.lrw);

  auto paired = [&](auto member) -> std::optional<double> {
    std::vector<double> a, b;
    for (std::size_t s = 0; s < per_subject[0].size(); ++s) {
      const auto& va = per_subject[0][s].*member;
      const auto& vb = per_subject[1][s].*member;
      if (va && vb) {
        a.push_back(*va);
        b.push_back(*vb);
      }
    }
    if (a.size() < 3) return std::nullopt;
    return paired_pvalue(a, b);
  };
  table.p_fix_incl = paired(&SubjectGroupValues::fix_incl);
  table.p_fix_excl = paired(&SubjectGroupValues::fix_excl);
  table.p_gd = paired(&SubjectGroupValues::gd);
  table.p_trt = paired(&SubjectGroupValues::trt);
  table.p_ffd = paired(&SubjectGroupValues::ffd);
  table.p_sfd = paired(&SubjectGroupValues::sfd);
  table.p_gopast = paired(&SubjectGroupValues::gopast);
  return table;
}

void render_gaze_stats(const GazeStatsTable& table, const std::string& path,
                       std::uint64_t seed) {
  CsvWriter csv(path, seed);
  csv.row({"", "# Word count (per subject)", "# Fixation (no fixation words included)",
           "# Fixation (no fixation words excluded)", "Gaze duration (GD)",
           "Total reading time (TRT)", "First fixation duration (FFD)",
           "Single fixation duration (SFD)", "Go-past time (GPT)"});

  auto group_row = [&](const std::string& name, const GroupGazeStats& g) {
    csv.row({name, std::to_string(g.word_count),
             format_mean_sd(g.fixations_incl_zero.mean, g.fixations_incl_zero.sd, 4),
             format_mean_sd(g.fixations_excl_zero.mean, g.fixations_excl_zero.sd, 4),
             format_mean_sd(g.gd_ms.mean, g.gd_ms.sd, 4),
             format_mean_sd(g.trt_ms.mean, g.trt_ms.sd, 4),
             format_mean_sd(g.ffd_ms.mean, g.ffd_ms.sd, 4),
             format_mean_sd(g.sfd_ms.mean, g.sfd_ms.sd, 4),
             format_mean_sd(g.gopast_ms.mean, g.gopast_ms.sd, 4)});
  };
  group_row("High RW", table.hrw);
  group_row("Low RW", table.lrw);
  csv.row({"Total Sample Size", std::to_string(table.total_words), "-", "-", "-", "-",
           "-", "-", "-"});
  csv.row({"P-value", "-", format_p(table.p_fix_incl), format_p(table.p_fix_excl),
           format_p(table.p_gd), format_p(table.p_trt), format_p(table.p_ffd),
           format_p(table.p_sfd), format_p(table.p_gopast)});
  for (const auto& note : table.notes) {
    csv.comment("note: " + note);
  }
}

}  // namespace fixread::analysis
