#include <array>
#include <charconv>
#include <functional>
#include <string>

#include <json.hpp>

#include "tricount/app/run.hpp"

namespace tricount::app {

using Json = nlohmann::ordered_json;

auto format_name(OutputFormat f) -> std::string_view { return f == OutputFormat::json ? "json" : "csv"; }

auto parse_format(std::string_view name) -> std::optional<OutputFormat> {
  if (name == "json") return OutputFormat::json;
  if (name == "csv") return OutputFormat::csv;
  return std::nullopt;
}

auto scheduler_name(runtime::Scheduler s) -> std::string_view {
  return s == runtime::Scheduler::deterministic ? "deterministic" : "threaded";
}

auto parse_scheduler(std::string_view name) -> std::optional<runtime::Scheduler> {
  if (name == "deterministic") return runtime::Scheduler::deterministic;
  if (name == "threaded") return runtime::Scheduler::threaded;
  return std::nullopt;
}

namespace {

auto exchange_name(algo::ExchangeMode m) -> std::string_view {
  return m == algo::ExchangeMode::sparse ? "sparse" : "dense";
}

auto parse_exchange(std::string_view name) -> algo::ExchangeMode {
  if (name == "sparse") return algo::ExchangeMode::sparse;
  if (name == "dense") return algo::ExchangeMode::dense;
  fail(ErrorKind::parse, "unknown exchange mode '" + std::string(name) + "'");
}

template <typename T>
auto required(std::optional<T> value, std::string_view what, std::string_view text) -> T {
  if (!value) fail(ErrorKind::parse, "unknown " + std::string(what) + " '" + std::string(text) + "'");
  return *value;
}

// --- JSON -------------------------------------------------------------------

template <typename T>
auto optional_json(std::optional<T> const& value) -> Json {
  return value ? Json(*value) : Json(nullptr);
}

template <typename T>
auto optional_from(Json const& j) -> std::optional<T> {
  if (j.is_null()) return std::nullopt;
  return j.get<T>();
}

auto to_json(RunConfig const& c) -> Json {
  Json j;
  j["algorithm"] = c.algorithm;
  j["pes"] = c.pes;
  j["input"] = optional_json(c.input);
  j["generator"] = optional_json(c.generator);
  j["delta"] = optional_json(c.delta);
  j["alpha"] = c.alpha;
  j["beta"] = c.beta;
  j["lcc"] = c.lcc;
  j["lcc_out"] = optional_json(c.lcc_out);
  j["approx"] = c.approx;
  j["fpr"] = c.fpr;
  j["seed"] = c.seed;
  j["scheduler"] = scheduler_name(c.scheduler);
  j["exchange"] = exchange_name(c.exchange);
  j["format"] = format_name(c.format);
  j["timing"] = c.timing;
  return j;
}

auto config_from(Json const& j) -> RunConfig {
  RunConfig c;
  c.algorithm = j.at("algorithm").get<std::string>();
  c.pes = j.at("pes").get<PeId>();
  c.input = optional_from<std::string>(j.at("input"));
  c.generator = optional_from<std::string>(j.at("generator"));
  c.delta = optional_from<std::uint64_t>(j.at("delta"));
  c.alpha = j.at("alpha").get<double>();
  c.beta = j.at("beta").get<double>();
  c.lcc = j.at("lcc").get<bool>();
  c.lcc_out = optional_from<std::string>(j.at("lcc_out"));
  c.approx = j.at("approx").get<bool>();
  c.fpr = j.at("fpr").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  auto const scheduler = j.at("scheduler").get<std::string>();
  c.scheduler = required<runtime::Scheduler>(parse_scheduler(scheduler), "scheduler", scheduler);
  c.exchange = parse_exchange(j.at("exchange").get<std::string>());
  auto const format = j.at("format").get<std::string>();
  c.format = required<OutputFormat>(parse_format(format), "format", format);
  c.timing = j.at("timing").get<bool>();
  return c;
}

auto to_json(RunReport const& r) -> Json {
  Json j;
  j["config"] = to_json(r.config);
  j["n"] = r.n;
  j["m"] = r.m;
  j["triangles"] = r.triangles;
  j["local_phase"] = r.local_phase;
  j["global_phase"] = r.global_phase;
  j["approximate"] = r.approximate;
  j["estimate_corrected"] = optional_json(r.estimate_corrected);
  j["total_seconds"] = r.total_seconds;
  Json phases = Json::array();
  for (auto const& p : r.phases) {
    Json jp;
    jp["name"] = p.name;
    jp["wall_seconds"] = p.wall_seconds;
    jp["max_messages_sent"] = p.max_messages_sent;
    jp["max_words_sent"] = p.max_words_sent;
    jp["total_words"] = p.total_words;
    jp["modeled_time"] = p.modeled_time;
    phases.push_back(std::move(jp));
  }
  j["phases"] = std::move(phases);
  j["max_messages_sent"] = r.max_messages_sent;
  j["max_messages_received"] = r.max_messages_received;
  j["max_words_sent"] = r.max_words_sent;
  j["max_words_received"] = r.max_words_received;
  j["total_messages"] = r.total_messages;
  j["total_words"] = r.total_words;
  j["max_neighborhood_words"] = r.max_neighborhood_words;
  j["modeled_time"] = r.modeled_time;
  j["max_buffered_words"] = r.max_buffered_words;
  j["max_record_words"] = r.max_record_words;
  j["buffer_bound_violations"] = r.buffer_bound_violations;
  return j;
}

auto report_from(Json const& j) -> RunReport {
  RunReport r;
  r.config = config_from(j.at("config"));
  r.n = j.at("n").get<VertexId>();
  r.m = j.at("m").get<std::uint64_t>();
  r.triangles = j.at("triangles").get<std::uint64_t>();
  r.local_phase = j.at("local_phase").get<std::uint64_t>();
  r.global_phase = j.at("global_phase").get<std::uint64_t>();
  r.approximate = j.at("approximate").get<bool>();
  r.estimate_corrected = optional_from<double>(j.at("estimate_corrected"));
  r.total_seconds = j.at("total_seconds").get<double>();
  for (auto const& jp : j.at("phases")) {
    r.phases.push_back({jp.at("name").get<std::string>(), jp.at("wall_seconds").get<double>(),
                        jp.at("max_messages_sent").get<std::uint64_t>(), jp.at("max_words_sent").get<std::uint64_t>(),
                        jp.at("total_words").get<std::uint64_t>(), jp.at("modeled_time").get<double>()});
  }
  r.max_messages_sent = j.at("max_messages_sent").get<std::uint64_t>();
  r.max_messages_received = j.at("max_messages_received").get<std::uint64_t>();
  r.max_words_sent = j.at("max_words_sent").get<std::uint64_t>();
  r.max_words_received = j.at("max_words_received").get<std::uint64_t>();
  r.total_messages = j.at("total_messages").get<std::uint64_t>();
  r.total_words = j.at("total_words").get<std::uint64_t>();
  r.max_neighborhood_words = j.at("max_neighborhood_words").get<std::uint64_t>();
  r.modeled_time = j.at("modeled_time").get<double>();
  r.max_buffered_words = j.at("max_buffered_words").get<std::uint64_t>();
  r.max_record_words = j.at("max_record_words").get<std::uint64_t>();
  r.buffer_bound_violations = j.at("buffer_bound_violations").get<std::uint64_t>();
  return r;
}

// --- CSV --------------------------------------------------------------------

auto fmt(double x) -> std::string {
  std::array<char, 32> buf{};
  auto const [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), end);
}

auto fmt(std::uint64_t x) -> std::string { return std::to_string(x); }

template <typename T>
auto number(std::string_view text) -> T {
  T out{};
  auto const [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    fail(ErrorKind::parse, "bad number '" + std::string(text) + "'");
  }
  return out;
}

auto boolean(std::string_view text) -> bool {
  if (text == "true") return true;
  if (text == "false") return false;
  fail(ErrorKind::parse, "bad boolean '" + std::string(text) + "'");
}

auto split(std::string_view text, char sep) -> std::vector<std::string_view> {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto const pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

auto encode_phases(std::vector<PhaseSummary> const& phases) -> std::string {
  std::string out;
  for (auto const& p : phases) {
    if (!out.empty()) out += ';';
    out += p.name + ':' + fmt(p.wall_seconds) + ':' + fmt(p.max_messages_sent) + ':' + fmt(p.max_words_sent) + ':' +
           fmt(p.total_words) + ':' + fmt(p.modeled_time);
  }
  return out;
}

auto decode_phases(std::string_view text) -> std::vector<PhaseSummary> {
  std::vector<PhaseSummary> phases;
  if (text.empty()) return phases;
  for (auto item : split(text, ';')) {
    auto const f = split(item, ':');
    if (f.size() != 6) fail(ErrorKind::parse, "bad phase entry '" + std::string(item) + "'");
    phases.push_back({std::string(f[0]), number<double>(f[1]), number<std::uint64_t>(f[2]),
                      number<std::uint64_t>(f[3]), number<std::uint64_t>(f[4]), number<double>(f[5])});
  }
  return phases;
}

struct Column {
  std::string_view name;
  std::function<std::string(RunReport const&)> get;
  std::function<void(RunReport&, std::string_view)> set;
};

auto opt_string(std::optional<std::string> const& s) -> std::string { return s.value_or(""); }
auto string_opt(std::string_view s) -> std::optional<std::string> {
  return s.empty() ? std::nullopt : std::optional<std::string>(s);
}

#define TRICOUNT_U64(field)                                                        \
  Column {                                                                         \
    #field, [](RunReport const& r) { return fmt(std::uint64_t{r.field}); },        \
        [](RunReport& r, std::string_view s) { r.field = number<std::uint64_t>(s); } \
  }

auto columns() -> std::vector<Column> const& {
  static std::vector<Column> const cols{
      {"algorithm", [](RunReport const& r) { return r.config.algorithm; },
       [](RunReport& r, std::string_view s) { r.config.algorithm = s; }},
      {"pes", [](RunReport const& r) { return fmt(std::uint64_t{r.config.pes}); },
       [](RunReport& r, std::string_view s) { r.config.pes = number<PeId>(s); }},
      {"input", [](RunReport const& r) { return opt_string(r.config.input); },
       [](RunReport& r, std::string_view s) { r.config.input = string_opt(s); }},
      {"generator", [](RunReport const& r) { return opt_string(r.config.generator); },
       [](RunReport& r, std::string_view s) { r.config.generator = string_opt(s); }},
      {"delta", [](RunReport const& r) { return r.config.delta ? fmt(*r.config.delta) : std::string(); },
       [](RunReport& r, std::string_view s) {
         r.config.delta = s.empty() ? std::nullopt : std::optional(number<std::uint64_t>(s));
       }},
      {"alpha", [](RunReport const& r) { return fmt(r.config.alpha); },
       [](RunReport& r, std::string_view s) { r.config.alpha = number<double>(s); }},
      {"beta", [](RunReport const& r) { return fmt(r.config.beta); },
       [](RunReport& r, std::string_view s) { r.config.beta = number<double>(s); }},
      {"lcc", [](RunReport const& r) { return std::string(r.config.lcc ? "true" : "false"); },
       [](RunReport& r, std::string_view s) { r.config.lcc = boolean(s); }},
      {"lcc_out", [](RunReport const& r) { return opt_string(r.config.lcc_out); },
       [](RunReport& r, std::string_view s) { r.config.lcc_out = string_opt(s); }},
      {"approx", [](RunReport const& r) { return std::string(r.config.approx ? "true" : "false"); },
       [](RunReport& r, std::string_view s) { r.config.approx = boolean(s); }},
      {"fpr", [](RunReport const& r) { return fmt(r.config.fpr); },
       [](RunReport& r, std::string_view s) { r.config.fpr = number<double>(s); }},
      {"seed", [](RunReport const& r) { return fmt(r.config.seed); },
       [](RunReport& r, std::string_view s) { r.config.seed = number<std::uint64_t>(s); }},
      {"scheduler", [](RunReport const& r) { return std::string(scheduler_name(r.config.scheduler)); },
       [](RunReport& r, std::string_view s) {
         r.config.scheduler = required<runtime::Scheduler>(parse_scheduler(s), "scheduler", s);
       }},
      {"exchange", [](RunReport const& r) { return std::string(exchange_name(r.config.exchange)); },
       [](RunReport& r, std::string_view s) { r.config.exchange = parse_exchange(s); }},
      {"format", [](RunReport const& r) { return std::string(format_name(r.config.format)); },
       [](RunReport& r, std::string_view s) {
         r.config.format = required<OutputFormat>(parse_format(s), "format", s);
       }},
      {"timing", [](RunReport const& r) { return std::string(r.config.timing ? "true" : "false"); },
       [](RunReport& r, std::string_view s) { r.config.timing = boolean(s); }},
      TRICOUNT_U64(n),
      TRICOUNT_U64(m),
      TRICOUNT_U64(triangles),
      TRICOUNT_U64(local_phase),
      TRICOUNT_U64(global_phase),
      {"approximate", [](RunReport const& r) { return std::string(r.approximate ? "true" : "false"); },
       [](RunReport& r, std::string_view s) { r.approximate = boolean(s); }},
      {"estimate_corrected",
       [](RunReport const& r) { return r.estimate_corrected ? fmt(*r.estimate_corrected) : std::string(); },
       [](RunReport& r, std::string_view s) {
         r.estimate_corrected = s.empty() ? std::nullopt : std::optional(number<double>(s));
       }},
      {"total_seconds", [](RunReport const& r) { return fmt(r.total_seconds); },
       [](RunReport& r, std::string_view s) { r.total_seconds = number<double>(s); }},
      {"phases", [](RunReport const& r) { return encode_phases(r.phases); },
       [](RunReport& r, std::string_view s) { r.phases = decode_phases(s); }},
      TRICOUNT_U64(max_messages_sent),
      TRICOUNT_U64(max_messages_received),
      TRICOUNT_U64(max_words_sent),
      TRICOUNT_U64(max_words_received),
      TRICOUNT_U64(total_messages),
      TRICOUNT_U64(total_words),
      TRICOUNT_U64(max_neighborhood_words),
      {"modeled_time", [](RunReport const& r) { return fmt(r.modeled_time); },
       [](RunReport& r, std::string_view s) { r.modeled_time = number<double>(s); }},
      TRICOUNT_U64(max_buffered_words),
      TRICOUNT_U64(max_record_words),
      TRICOUNT_U64(buffer_bound_violations),
  };
  return cols;
}

#undef TRICOUNT_U64

auto quote(std::string const& field) -> std::string {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

/// Splits CSV text into records of fields, honoring double-quoted fields.
auto parse_csv(std::string_view text) -> std::vector<std::vector<std::string>> {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool row_started = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    char const c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      row_started = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      row_started = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (row_started || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      field.clear();
      row.clear();
      row_started = false;
    } else {
      field += c;
      row_started = true;
    }
  }
  if (quoted) fail(ErrorKind::parse, "unterminated quoted CSV field");
  if (row_started || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

auto emit(std::vector<RunReport> const& reports, OutputFormat format) -> std::string {
  if (format == OutputFormat::json) {
    if (reports.size() == 1) return to_json(reports.front()).dump(2) + '\n';
    Json all = Json::array();
    for (auto const& r : reports) all.push_back(to_json(r));
    return all.dump(2) + '\n';
  }
  auto const& cols = columns();
  std::string out;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out += ',';
    out += cols[i].name;
  }
  out += '\n';
  for (auto const& r : reports) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i) out += ',';
      out += quote(cols[i].get(r));
    }
    out += '\n';
  }
  return out;
}

auto emit(RunReport const& report, OutputFormat format) -> std::string {
  return emit(std::vector<RunReport>{report}, format);
}

auto parse_reports(std::string_view text, OutputFormat format) -> std::vector<RunReport> {
  std::vector<RunReport> reports;
  if (format == OutputFormat::json) {
    Json j;
    try {
      j = Json::parse(text);
      if (j.is_array()) {
        for (auto const& item : j) reports.push_back(report_from(item));
      } else {
        reports.push_back(report_from(j));
      }
    } catch (Json::exception const& e) {
      fail(ErrorKind::parse, std::string("report JSON: ") + e.what());
    }
    return reports;
  }
  auto const rows = parse_csv(text);
  if (rows.empty()) fail(ErrorKind::parse, "CSV report without header");
  auto const& cols = columns();
  auto const& header = rows.front();
  if (header.size() != cols.size()) fail(ErrorKind::parse, "unexpected CSV header");
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (header[i] != cols[i].name) fail(ErrorKind::parse, "unexpected CSV column '" + header[i] + "'");
  }
  for (std::size_t k = 1; k < rows.size(); ++k) {
    if (rows[k].size() != cols.size()) {
      fail(ErrorKind::parse, "CSV row " + std::to_string(k) + " has " + std::to_string(rows[k].size()) + " fields");
    }
    RunReport r;
    for (std::size_t i = 0; i < cols.size(); ++i) cols[i].set(r, rows[k][i]);
    reports.push_back(std::move(r));
  }
  return reports;
}

}  // namespace tricount::app
