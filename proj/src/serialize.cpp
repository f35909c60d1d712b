// SPDX-License-Identifier: Apache-2.0
#include "adascale/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "adascale/error.hpp"

namespace adascale {

namespace {

enum class Severity { input, config };

[[noreturn]] void fail(Severity sev, const std::string& msg) {
  if (sev == Severity::config) throw ConfigError(msg);
  throw InputError(msg);
}

/// Field reader over one JSON object. Tracks which keys were consumed so
/// leftovers can be reported.
class Reader {
 public:
  Reader(const Json& obj, std::string where, Severity sev) : obj_(obj), where_(std::move(where)), sev_(sev) {
    if (!obj_.is_object()) fail(sev_, where_ + ": expected an object");
  }

  bool has(const char* key) const { return obj_.contains(key); }

  const Json& at(const char* key) {
    seen_.insert(key);
    if (!obj_.contains(key)) fail(sev_, where_ + "." + key + ": missing");
    return obj_.at(key);
  }

  template <class T>
  void opt(const char* key, T& out) {
    if (has(key)) out = get<T>(key);
  }

  template <class T>
  T get(const char* key) {
    const Json& v = at(key);
    const std::string field = where_ + "." + key;
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) fail(sev_, field + ": expected a boolean");
      return v.get<bool>();
    } else if constexpr (std::is_same_v<T, std::uint64_t>) {
      if (!v.is_number_unsigned()) fail(sev_, field + ": expected a non-negative integer");
      return v.get<std::uint64_t>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) fail(sev_, field + ": expected an integer");
      const auto x = v.get<long long>();
      if (x < std::numeric_limits<T>::min() || x > std::numeric_limits<T>::max())
        fail(sev_, field + ": integer out of range");
      return static_cast<T>(x);
    } else {
      if (!v.is_number()) fail(sev_, field + ": expected a number");
      return v.get<double>();
    }
  }

  void reject_unknown() const {
    for (const auto& [key, value] : obj_.items()) {
      if (key == "schema_version") continue;
      if (!seen_.contains(key)) fail(sev_, where_ + "." + key + ": unknown field");
    }
  }

 private:
  const Json& obj_;
  std::string where_;
  Severity sev_;
  std::set<std::string> seen_;
};

Json versioned() {
  Json j = Json::object();
  j["schema_version"] = kSchemaVersion;
  return j;
}

Json point_json(Point2 p) { return Json::array({p.x, p.y}); }

Point2 point_from(const Json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw InputError(where + ": expected [x, y]");
  return {v[0].get<double>(), v[1].get<double>()};
}

Json rect_json(const RotatedRect& r) {
  Json j = Json::object();
  j["cx"] = r.cx();
  j["cy"] = r.cy();
  j["width"] = r.width();
  j["height"] = r.height();
  j["angle"] = r.angle();
  Json quad = Json::array();
  for (const Point2& p : r.corners()) quad.push_back(point_json(p));
  j["quad"] = std::move(quad);
  return j;
}

const Json& array_field(Reader& r, const char* key, const std::string& where) {
  const Json& v = r.at(key);
  if (!v.is_array()) throw InputError(where + "." + key + ": expected an array");
  return v;
}

Json scores_json(const Scores& s) {
  Json j = Json::object();
  j["recall"] = s.recall;
  j["precision"] = s.precision;
  j["f_score"] = s.f_score;
  return j;
}

Json matches_json(const std::vector<Match>& matches, const std::vector<int>& det_ids,
                  const std::vector<int>& gt_ids) {
  Json out = Json::array();
  for (const Match& m : matches) {
    Json j = Json::object();
    j["det_id"] = det_ids.at(static_cast<std::size_t>(m.det_id));
    j["gt_id"] = gt_ids.at(static_cast<std::size_t>(m.gt_id));
    j["iou"] = m.iou;
    out.push_back(std::move(j));
  }
  return out;
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

}  // namespace

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string() + ": cannot open");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError(path.string() + ": cannot write");
  out << text;
  if (!out) throw InputError(path.string() + ": write failed");
}

void append_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw InputError(path.string() + ": cannot write");
  out << text;
  if (!out) throw InputError(path.string() + ": write failed");
}

Json parse_document(const std::string& text, const std::string& source) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(source + ": JSON parse error at byte " + std::to_string(e.byte));
  }
  if (!j.is_object()) throw InputError(source + ": top level must be an object");
  if (!j.contains("schema_version") || !j["schema_version"].is_string())
    throw InputError(source + ": missing schema_version");
  const std::string version = j["schema_version"].get<std::string>();
  int major = -1;
  if (std::sscanf(version.c_str(), "%d", &major) != 1 || major != kSchemaMajor)
    throw InputError(source + ": unsupported schema_version " + version);
  return j;
}

Json load_document(const std::filesystem::path& path) { return parse_document(read_text(path), path.string()); }

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json scene_to_json(const SceneSpec& scene) {
  Json j = versioned();
  j["canvas_width"] = scene.canvas_width;
  j["canvas_height"] = scene.canvas_height;
  j["seed"] = scene.seed;
  Json words = Json::array();
  for (const Word& w : scene.words) {
    Json wj = Json::object();
    wj["id"] = w.id;
    Json quad = Json::array();
    for (const Point2& p : w.quad) quad.push_back(point_json(p));
    wj["quad"] = std::move(quad);
    wj["ink"] = w.ink;
    words.push_back(std::move(wj));
  }
  j["words"] = std::move(words);
  return j;
}

SceneSpec scene_from_json(const Json& j, const std::string& source) {
  Reader r(j, source, Severity::input);
  SceneSpec s;
  s.canvas_width = r.get<int>("canvas_width");
  s.canvas_height = r.get<int>("canvas_height");
  r.opt("seed", s.seed);
  const Json& words = array_field(r, "words", source);
  for (std::size_t i = 0; i < words.size(); ++i) {
    const std::string where = source + ".words[" + std::to_string(i) + "]";
    Reader wr(words[i], where, Severity::input);
    Word w;
    w.id = wr.get<int>("id");
    wr.opt("ink", w.ink);
    const Json& quad = array_field(wr, "quad", where);
    for (std::size_t k = 0; k < quad.size(); ++k)
      w.quad.push_back(point_from(quad[k], where + ".quad[" + std::to_string(k) + "]"));
    wr.reject_unknown();
    s.words.push_back(std::move(w));
  }
  r.reject_unknown();
  return validated(std::move(s));
}

RunConfig config_from_json(const Json& j, const std::string& source) {
  RunConfig cfg;
  Reader r(j, source, Severity::config);
  if (r.has("pipeline")) {
    Reader p(r.at("pipeline"), source + ".pipeline", Severity::config);
    PipelineConfig& c = cfg.pipeline;
    p.opt("first_pass_long_side", c.first_pass_long_side);
    p.opt("kappa", c.kappa);
    p.opt("s_ref", c.s_ref);
    p.opt("seg_threshold", c.seg_threshold);
    p.opt("blob_pad_factor", c.blob_pad_factor);
    p.opt("min_blob_area", c.min_blob_area);
    p.opt("min_det_area", c.min_det_area);
    p.opt("gutter", c.gutter);
    p.opt("max_bin_side", c.max_bin_side);
    p.opt("shrink_r", c.shrink_r);
    p.opt("reference_long_side", c.reference_long_side);
    p.reject_unknown();
  }
  if (r.has("oracle")) {
    Reader o(r.at("oracle"), source + ".oracle", Severity::config);
    OracleConfig& c = cfg.oracle;
    o.opt("blur_coeff", c.blur_coeff);
    o.opt("min_detectable_height", c.min_detectable_height);
    o.opt("noise_amp", c.noise_amp);
    o.opt("scale_noise_amp", c.scale_noise_amp);
    o.opt("seed", c.seed);
    o.reject_unknown();
  }
  r.reject_unknown();
  try {
    validate(cfg.pipeline);
    validate(cfg.oracle);
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return cfg;
}

Json config_to_json(const RunConfig& cfg) {
  Json j = versioned();
  const PipelineConfig& c = cfg.pipeline;
  Json p = Json::object();
  p["first_pass_long_side"] = c.first_pass_long_side;
  p["kappa"] = c.kappa;
  p["s_ref"] = c.s_ref;
  p["seg_threshold"] = c.seg_threshold;
  p["blob_pad_factor"] = c.blob_pad_factor;
  p["min_blob_area"] = c.min_blob_area;
  p["min_det_area"] = c.min_det_area;
  p["gutter"] = c.gutter;
  p["max_bin_side"] = c.max_bin_side;
  p["shrink_r"] = c.shrink_r;
  p["reference_long_side"] = c.reference_long_side;
  j["pipeline"] = std::move(p);
  Json o = Json::object();
  o["blur_coeff"] = cfg.oracle.blur_coeff;
  o["min_detectable_height"] = cfg.oracle.min_detectable_height;
  o["noise_amp"] = cfg.oracle.noise_amp;
  o["scale_noise_amp"] = cfg.oracle.scale_noise_amp;
  o["seed"] = cfg.oracle.seed;
  j["oracle"] = std::move(o);
  return j;
}

Json detections_to_json(const std::vector<Detection>& dets) {
  Json j = versioned();
  Json arr = Json::array();
  for (std::size_t i = 0; i < dets.size(); ++i) {
    Json d = Json::object();
    d["id"] = static_cast<int>(i);
    d["confidence"] = dets[i].confidence;
    const Json rect = rect_json(dets[i].rect);
    for (const auto& [k, v] : rect.items()) d[k] = v;
    arr.push_back(std::move(d));
  }
  j["detections"] = std::move(arr);
  return j;
}

std::vector<Detection> detections_from_json(const Json& j, const std::string& source, std::vector<int>* ids) {
  Reader r(j, source, Severity::input);
  const Json& arr = array_field(r, "detections", source);
  std::vector<Detection> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string where = source + ".detections[" + std::to_string(i) + "]";
    Reader d(arr[i], where, Severity::input);
    const int id = d.get<int>("id");
    double conf = 0.0;
    d.opt("confidence", conf);
    const double cx = d.get<double>("cx"), cy = d.get<double>("cy");
    const double w = d.get<double>("width"), h = d.get<double>("height");
    const double a = d.get<double>("angle");
    if (d.has("quad")) d.at("quad");
    d.reject_unknown();
    if (!(w > 0) || !(h > 0)) throw InputError(where + ": non-positive size");
    out.push_back({RotatedRect(cx, cy, w, h, a), conf});
    if (ids) ids->push_back(id);
  }
  r.reject_unknown();
  return out;
}

Json stats_to_json(const PipelineStats& s) {
  Json j = versioned();
  j["pixels_pass1"] = s.pixels_pass1;
  j["pixels_pass2"] = s.pixels_pass2;
  j["reference_pixels"] = s.reference_pixels;
  j["reduction_ratio"] = s.reduction_ratio;
  j["blob_count"] = s.blob_count;
  j["knapsack_count"] = s.knapsack_count;
  j["canvas_width"] = s.canvas_width;
  j["canvas_height"] = s.canvas_height;
  return j;
}

PipelineStats stats_from_json(const Json& j, const std::string& source) {
  Reader r(j, source, Severity::input);
  PipelineStats s;
  s.pixels_pass1 = r.get<long long>("pixels_pass1");
  s.pixels_pass2 = r.get<long long>("pixels_pass2");
  s.reference_pixels = r.get<long long>("reference_pixels");
  s.reduction_ratio = r.get<double>("reduction_ratio");
  s.blob_count = r.get<int>("blob_count");
  s.knapsack_count = r.get<int>("knapsack_count");
  s.canvas_width = r.get<int>("canvas_width");
  s.canvas_height = r.get<int>("canvas_height");
  r.reject_unknown();
  return s;
}

Json items_to_json(const std::vector<PackItem>& items) {
  Json j = versioned();
  Json arr = Json::array();
  for (const PackItem& it : items) arr.push_back(Json{{"id", it.id}, {"width", it.width}, {"height", it.height}});
  j["items"] = std::move(arr);
  return j;
}

std::vector<PackItem> items_from_json(const Json& j, const std::string& source) {
  Reader r(j, source, Severity::input);
  const Json& arr = array_field(r, "items", source);
  std::vector<PackItem> out;
  std::set<int> ids;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string where = source + ".items[" + std::to_string(i) + "]";
    Reader it(arr[i], where, Severity::input);
    PackItem p{it.get<int>("id"), it.get<int>("width"), it.get<int>("height")};
    it.reject_unknown();
    if (p.width <= 0 || p.height <= 0) throw InputError(where + ": non-positive size");
    if (!ids.insert(p.id).second) throw InputError(where + ": duplicate id " + std::to_string(p.id));
    out.push_back(p);
  }
  r.reject_unknown();
  return out;
}

Json layouts_to_json(const std::vector<KnapsackLayout>& layouts, int gutter) {
  Json j = versioned();
  j["gutter"] = gutter;
  Json bins = Json::array();
  for (const KnapsackLayout& l : layouts) {
    Json b = Json::object();
    b["bin_width"] = l.bin_width;
    b["bin_height"] = l.bin_height;
    b["occupancy"] = l.occupancy;
    Json ps = Json::array();
    for (const Placement& p : l.placements) {
      ps.push_back(Json{{"id", p.id},
                        {"x", p.x},
                        {"y", p.y},
                        {"width", p.width},
                        {"height", p.height},
                        {"rotated", p.rotated}});
    }
    b["placements"] = std::move(ps);
    bins.push_back(std::move(b));
  }
  j["bins"] = std::move(bins);
  return j;
}

std::vector<KnapsackLayout> layouts_from_json(const Json& j, const std::string& source) {
  Reader r(j, source, Severity::input);
  r.get<int>("gutter");
  const Json& bins = array_field(r, "bins", source);
  std::vector<KnapsackLayout> out;
  for (std::size_t i = 0; i < bins.size(); ++i) {
    const std::string where = source + ".bins[" + std::to_string(i) + "]";
    Reader b(bins[i], where, Severity::input);
    KnapsackLayout l;
    l.bin_width = b.get<int>("bin_width");
    l.bin_height = b.get<int>("bin_height");
    l.occupancy = b.get<double>("occupancy");
    const Json& ps = array_field(b, "placements", where);
    for (std::size_t k = 0; k < ps.size(); ++k) {
      Reader p(ps[k], where + ".placements[" + std::to_string(k) + "]", Severity::input);
      Placement pl;
      pl.id = p.get<int>("id");
      pl.x = p.get<int>("x");
      pl.y = p.get<int>("y");
      pl.width = p.get<int>("width");
      pl.height = p.get<int>("height");
      pl.rotated = p.get<bool>("rotated");
      p.reject_unknown();
      l.placements.push_back(pl);
    }
    b.reject_unknown();
    out.push_back(std::move(l));
  }
  r.reject_unknown();
  return out;
}

Json report_to_json(const EvalReport& report, const std::vector<int>& det_ids, const std::vector<int>& gt_ids) {
  Json j = versioned();
  j["scores"] = scores_json(report.scores);
  j["matches"] = matches_json(report.matches, det_ids, gt_ids);
  const PixelReport& px = report.pixels;
  Json p = Json::object();
  p["scenes"] = px.scenes;
  p["total_pass1"] = px.total_pass1;
  p["total_pass2"] = px.total_pass2;
  p["total_pixels"] = px.total_pixels;
  p["total_reference"] = px.total_reference;
  p["mean_pass1"] = px.mean_pass1;
  p["mean_pass2"] = px.mean_pass2;
  p["mean_pixels"] = px.mean_pixels;
  p["reduction_ratio"] = px.reduction_ratio;
  p["per_scene_ratio"] = px.per_scene_ratio;
  j["pixels"] = std::move(p);
  Json scenes = Json::array();
  for (const SceneEval& e : report.per_scene) {
    Json s = Json::object();
    s["scene_index"] = e.scene_index;
    s["n_dets"] = e.n_dets;
    s["n_gts"] = e.n_gts;
    s["n_matches"] = e.matches.size();
    s["scores"] = scores_json(e.scores);
    scenes.push_back(std::move(s));
  }
  j["per_scene"] = std::move(scenes);
  return j;
}

std::string report_csv_row(const std::string& method, const EvalReport& report) {
  return method + "," + fixed(100.0 * report.scores.recall, 2) + "," + fixed(100.0 * report.scores.precision, 2) +
         "," + fixed(100.0 * report.scores.f_score, 2) + "," + std::to_string(report.pixels.total_pass1) + "," +
         std::to_string(report.pixels.total_pass2) + "," + std::to_string(report.pixels.total_pixels) + "," +
         fixed(report.pixels.reduction_ratio, 3) + "\n";
}

std::string report_csv(const std::string& method, const EvalReport& report) {
  return std::string(kCsvHeader) + "\n" + report_csv_row(method, report);
}

Json loss_to_json(const LossBreakdown& loss) {
  Json j = versioned();
  j["segment"] = loss.segment;
  j["scale"] = loss.scale;
  j["total"] = loss.total;
  return j;
}

}  // namespace adascale
