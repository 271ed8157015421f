// SPDX-License-Identifier: Apache-2.0
#include "erc/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "erc/error.hpp"

#ifndef ERC_LAB_VERSION
#define ERC_LAB_VERSION "0.0.0"
#endif

namespace erc {
namespace {

using json = nlohmann::json;

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::vector<std::string> split_line(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.emplace_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  return out + "\"";
}

}  // namespace

std::string_view tool_version() { return ERC_LAB_VERSION; }

std::string csv_meta_line(std::string_view config_hash) {
  return "# config_hash=" + std::string(config_hash) + " tool=erc-lab/" + std::string(tool_version());
}

std::string format_fixed(double value, int digits) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  // Avoid "-0.000000" so equal results print identically.
  std::string s = buf;
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + tmp.string() + "'");
    out.write(content.data(), std::streamsize(content.size()));
    if (!out) throw DataError("failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw DataError("cannot move '" + tmp.string() + "' into place: " + ec.message());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string render_line_chart(std::string_view title, std::string_view x_label, std::string_view y_label,
                              const std::vector<LineSeries>& series) {
  constexpr double W = 720, H = 440, left = 70, right = 170, top = 40, bottom = 60;
  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = x_min, y_max = -x_min;
  for (const auto& s : series)
    for (const auto& [x, y] : s.points) {
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
  if (!std::isfinite(x_min)) x_min = 0, x_max = 1, y_min = 0, y_max = 1;
  if (x_max == x_min) x_max = x_min + 1;
  if (y_max == y_min) y_max = y_min + 1;
  const double pad = 0.05 * (y_max - y_min);
  y_min -= pad;
  y_max += pad;
  const double pw = W - left - right, ph = H - top - bottom;
  auto sx = [&](double x) { return left + (x - x_min) / (x_max - x_min) * pw; };
  auto sy = [&](double y) { return top + (1.0 - (y - y_min) / (y_max - y_min)) * ph; };
  static const char* kPalette[] = {"#d62728", "#2ca02c", "#1f77b4", "#7f7f7f",
                                   "#ff7f0e", "#9467bd", "#8c564b", "#e377c2"};

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << xml_escape(title)
    << "</text>\n";
  o << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\"" << top + ph
    << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph
    << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x_min + (x_max - x_min) * i / 4.0;
    const double yv = y_min + (y_max - y_min) * i / 4.0;
    o << "<text x=\"" << format_fixed(sx(xv), 1) << "\" y=\"" << top + ph + 18
      << "\" text-anchor=\"middle\">" << format_fixed(xv, 0) << "</text>\n";
    o << "<text x=\"" << left - 8 << "\" y=\"" << format_fixed(sy(yv) + 4, 1) << "\" text-anchor=\"end\">"
      << format_fixed(yv, 3) << "</text>\n";
  }
  o << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">"
    << xml_escape(x_label) << "</text>\n";
  o << "<text x=\"18\" y=\"" << top + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
    << top + ph / 2 << ")\">" << xml_escape(y_label) << "</text>\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kPalette[i % std::size(kPalette)];
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t p = 0; p < series[i].points.size(); ++p) {
      const auto& [x, y] = series[i].points[p];
      o << (p ? " " : "") << format_fixed(sx(x), 2) << "," << format_fixed(sy(y), 2);
    }
    o << "\"/>\n";
    for (const auto& [x, y] : series[i].points)
      o << "<circle cx=\"" << format_fixed(sx(x), 2) << "\" cy=\"" << format_fixed(sy(y), 2)
        << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    const double ly = top + 10 + 18.0 * double(i);
    o << "<line x1=\"" << left + pw + 15 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 35 << "\" y2=\""
      << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << left + pw + 40 << "\" y=\"" << ly + 4 << "\">" << xml_escape(series[i].name)
      << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

json to_json(const stats::StatReport& r) {
  json j;
  j["test"] = r.test;
  j["statistic"] = finite_or_null(r.statistic);
  j["df1"] = r.df1;
  j["df2"] = r.df2 ? json(*r.df2) : json(nullptr);
  j["p_value"] = r.p_value;
  j["effect_size"] = r.effect_size ? json(*r.effect_size) : json(nullptr);
  j["correction_m"] = r.correction_m;
  j["n"] = r.n;
  j["degenerate"] = r.degenerate;
  return j;
}

json to_json(const SeedSummary& s) {
  return {{"n", s.n},     {"mean", s.mean},       {"std", s.std},          {"min", s.min},
          {"max", s.max}, {"ci_low", s.ci_low}, {"ci_high", s.ci_high}};
}

json to_json(const SaturationEntry& e) {
  return {{"k_star", e.k_star},
          {"f1_at_zero", e.f1_at_zero},
          {"f1_at_k_star", e.f1_at_k_star},
          {"delta", e.delta},
          {"target", e.target},
          {"saturation_k", e.saturation_k},
          {"flat", e.flat}};
}

json to_json(const EmotionProfiles& p) {
  json rows = json::array();
  for (const auto& r : p.rows) {
    json j = to_json(r.mean_curve);
    j["emotion"] = std::string(to_string(r.emotion));
    j["seed_saturation_k"] = r.seed_saturation_k;
    j["seed_delta"] = r.seed_delta;
    rows.push_back(std::move(j));
  }
  return {{"overall", to_json(p.overall)},
          {"emotions", rows},
          {"saturation_kruskal", p.saturation_kruskal ? to_json(*p.saturation_kruskal) : json(nullptr)},
          {"delta_anova", p.delta_anova ? to_json(*p.delta_anova) : json(nullptr)}};
}

json to_json(const HeadlineK& h) {
  return {{"k", h.k}, {"val_weighted_f1", h.val_weighted_f1}, {"test", to_json(h.test)}};
}

json to_json(const AblationReport& r) {
  json variants = json::array();
  for (std::size_t i = 0; i < r.variants.size(); ++i)
    variants.push_back({{"name", r.variants[i]}, {"scores", r.scores[i]}, {"summary", to_json(r.summaries[i])}});
  json pairs = json::array();
  for (const auto& c : r.vs_baseline)
    pairs.push_back({{"variant", c.variant}, {"delta", c.delta}, {"test", to_json(c.test)}});
  return {{"dimension", std::string(to_string(r.dimension))},
          {"baseline", r.variants.front()},
          {"seeds", r.seeds},
          {"variants", variants},
          {"omnibus", to_json(r.omnibus)},
          {"vs_baseline", pairs}};
}

json to_json(const DmReport& r) {
  json freq = json::array();
  for (const auto& f : r.frequencies)
    freq.push_back({{"marker", f.marker}, {"category", f.category}, {"count", f.count}});
  json rows = json::array();
  for (const auto& p : r.periphery)
    rows.push_back({{"emotion", std::string(to_string(p.emotion))},
                    {"lp", p.counts[0]},
                    {"medial", p.counts[1]},
                    {"rp", p.counts[2]},
                    {"total", p.total()},
                    {"lp_share", p.share(Periphery::lp)},
                    {"medial_share", p.share(Periphery::medial)},
                    {"rp_share", p.share(Periphery::rp)}});
  json pairs = json::array();
  for (const auto& p : r.pairwise)
    pairs.push_back({{"a", std::string(to_string(p.a))},
                     {"b", std::string(to_string(p.b))},
                     {"raw_p", p.raw_p},
                     {"test", to_json(p.test)}});
  return {{"taxonomy", std::string(to_string(r.taxonomy))},
          {"frequencies", freq},
          {"frequency_total", r.frequency_total},
          {"utterances_scanned", r.utterances_scanned},
          {"labeled_utterances", r.labeled_utterances},
          {"occurrences", r.occurrences.size()},
          {"single_token_occurrences", r.single_token_occurrences},
          {"periphery", rows},
          {"association", r.association ? to_json(*r.association) : json(nullptr)},
          {"position_anova", r.position_anova ? to_json(*r.position_anova) : json(nullptr)},
          {"pairwise", pairs},
          {"notices", r.notices}};
}

std::string sweep_csv(const SweepResult& sweep, std::string_view config_hash) {
  std::ostringstream o;
  o << csv_meta_line(config_hash) << "\n";
  o << "K,seed,wf1,val_wf1,best_epoch,epochs";
  for (Emotion e : classes(sweep.taxonomy)) o << ",f1_" << to_string(e);
  o << "\n";
  for (std::size_t ki = 0; ki < sweep.grid.size(); ++ki)
    for (std::size_t si = 0; si < sweep.seeds.size(); ++si) {
      const auto& r = sweep.runs[ki][si];
      o << sweep.grid[ki] << "," << sweep.seeds[si] << "," << format_fixed(r.weighted_f1) << ","
        << format_fixed(r.val_weighted_f1) << "," << r.best_epoch << "," << r.epochs_run;
      for (const auto& [e, f1] : r.per_class_f1) o << "," << format_fixed(f1);
      o << "\n";
    }
  return o.str();
}

SweepResult parse_sweep_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<std::string> header;
  SweepResult out;
  std::map<std::size_t, std::map<std::uint64_t, RunResult>> cells;
  std::vector<Emotion> emotions;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_line(line, ',');
    if (header.empty()) {
      header = fields;
      if (header.size() < 7 || header[0] != "K" || header[1] != "seed")
        throw ParseError("unexpected sweep CSV header", line_no);
      for (std::size_t i = 6; i < header.size(); ++i) {
        const auto e = parse_emotion(std::string_view(header[i]).substr(3));
        if (header[i].rfind("f1_", 0) != 0 || !e) throw ParseError("bad class column '" + header[i] + "'", line_no);
        emotions.push_back(*e);
      }
      out.taxonomy = emotions.size() == 6 ? Taxonomy::six_way : Taxonomy::four_way;
      continue;
    }
    if (fields.size() != header.size()) throw ParseError("wrong number of columns", line_no);
    try {
      RunResult r;
      r.taxonomy = out.taxonomy;
      r.k = std::stoul(fields[0]);
      r.seed = std::stoull(fields[1]);
      r.weighted_f1 = std::stod(fields[2]);
      r.val_weighted_f1 = std::stod(fields[3]);
      r.best_epoch = std::stoul(fields[4]);
      r.epochs_run = std::stoul(fields[5]);
      for (std::size_t i = 0; i < emotions.size(); ++i) r.per_class_f1.emplace_back(emotions[i], std::stod(fields[6 + i]));
      cells[r.k][r.seed] = std::move(r);
    } catch (const std::logic_error&) {
      throw ParseError("malformed number", line_no);
    }
  }
  if (header.empty()) throw ParseError("sweep CSV has no header", line_no);
  for (const auto& [k, by_seed] : cells) {
    out.grid.push_back(k);
    std::vector<RunResult> row;
    std::vector<std::uint64_t> seeds;
    for (const auto& [seed, r] : by_seed) {
      seeds.push_back(seed);
      row.push_back(r);
    }
    if (out.seeds.empty()) out.seeds = seeds;
    else if (out.seeds != seeds) throw FormatError("sweep CSV has a ragged seed set");
    out.runs.push_back(std::move(row));
  }
  return out;
}

std::string ablation_csv(const AblationReport& report, std::string_view config_hash) {
  std::ostringstream o;
  o << csv_meta_line(config_hash) << "\n";
  o << "dimension,variant,seed,wf1\n";
  for (std::size_t v = 0; v < report.variants.size(); ++v)
    for (std::size_t s = 0; s < report.seeds.size(); ++s)
      o << to_string(report.dimension) << "," << csv_field(report.variants[v]) << "," << report.seeds[s] << ","
        << format_fixed(report.scores[v][s]) << "\n";
  return o.str();
}

std::string occurrences_csv(const DmReport& report, std::string_view config_hash) {
  std::ostringstream o;
  o << csv_meta_line(config_hash) << "\n";
  o << "dialogue_id,utt_id,turn_index,marker,category,emotion,start,n_tokens,position,periphery\n";
  for (const auto& occ : report.occurrences)
    o << csv_field(occ.dialogue_id) << "," << csv_field(occ.utt_id) << "," << occ.turn_index << ","
      << csv_field(occ.marker) << "," << csv_field(occ.category) << ","
      << (occ.emotion ? to_string(*occ.emotion) : std::string_view()) << "," << occ.start << "," << occ.n_tokens
      << "," << format_fixed(occ.position) << "," << to_string(occ.periphery) << "\n";
  return o.str();
}

std::string sweep_svg(const SweepResult& sweep) {
  std::vector<LineSeries> series;
  const auto cls = classes(sweep.taxonomy);
  for (std::size_t c = 0; c < cls.size(); ++c) {
    LineSeries s;
    s.name = std::string(to_string(cls[c]));
    for (const auto& [k, f] : sweep.class_mean_curve(c)) s.points.emplace_back(double(k), f);
    series.push_back(std::move(s));
  }
  LineSeries overall{"weighted", {}};
  for (const auto& [k, f] : sweep.mean_curve()) overall.points.emplace_back(double(k), f);
  series.push_back(std::move(overall));
  return render_line_chart("F1 by context length", "K (preceding turns)", "F1 (mean over seeds)", series);
}

}  // namespace erc
