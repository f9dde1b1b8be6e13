// Copyright 2026 The lqrgaifo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lqrgaifo/serialization.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "lqrgaifo/errors.hpp"

namespace lqrgaifo {

namespace {

constexpr const char* kMagic = "# lqrgaifo";

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::Io, what); }

// Malformed numbers in a container are I/O errors, not config errors.
template <typename Parse>
auto parse_field(Parse parse, const std::string& s, const std::string& what) {
  try {
    return parse(s, what);
  } catch (const Error& e) {
    bad(e.what());
  }
}

class RowWriter {
 public:
  explicit RowWriter(std::ostream& out) : out_(out) {}
  RowWriter& label(long long v) {
    out_ << v;
    return *this;
  }
  RowWriter& value(double v) {
    out_ << '\t' << text::format_double(v);
    return *this;
  }
  RowWriter& values(const Matrix& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) value(m(r, c));
    }
    return *this;
  }
  RowWriter& empty(int count) {
    for (int i = 0; i < count; ++i) out_ << '\t';
    return *this;
  }
  void end() { out_ << '\n'; }

 private:
  std::ostream& out_;
};

class RowReader {
 public:
  RowReader(std::istream& in, const std::string& what) : what_(what) {
    std::string line;
    do {
      if (!std::getline(in, line)) bad(what + ": unexpected end of input");
    } while (text::trim(line).empty());
    if (!line.empty() && line.back() == '\r') line.pop_back();
    fields_ = text::split(line, '\t');
  }

  std::size_t size() const { return fields_.size(); }
  long long label() { return parse_field(text::parse_int, next(), what_); }
  double value() { return parse_field(text::parse_double, next(), what_); }
  Matrix matrix(Eigen::Index rows, Eigen::Index cols) {
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = value();
    }
    return m;
  }
  Vector vector(Eigen::Index n) { return matrix(n, 1); }
  void expect_empty(int count) {
    for (int i = 0; i < count; ++i) {
      if (!text::trim(next()).empty()) bad(what_ + ": terminal row carries an action");
    }
  }
  void finish() const {
    if (pos_ != fields_.size()) bad(what_ + ": too many fields in row");
  }

 private:
  const std::string& next() {
    if (pos_ >= fields_.size()) bad(what_ + ": too few fields in row");
    return fields_[pos_++];
  }

  std::string what_;
  std::vector<std::string> fields_;
  std::size_t pos_ = 0;
};

int header_int(const Header& h, const std::string& key) {
  const long long v = parse_field(text::parse_int, h.get(key), key);
  if (v < 0 || v > 100'000'000) bad("header value out of range: " + key);
  return static_cast<int>(v);
}

Header expect_header(std::istream& in, const std::string& kind) {
  Header h;
  if (!io::read_header(in, h)) bad("missing " + kind + " header");
  if (h.kind != kind) bad("expected a " + kind + " block, found '" + h.kind + "'");
  return h;
}

}  // namespace

const std::string* Header::find(const std::string& key) const {
  for (const auto& [k, v] : entries) {
    if (k == key) return &v;
  }
  return nullptr;
}

const std::string& Header::get(const std::string& key) const {
  const std::string* v = find(key);
  if (!v) bad("header of '" + kind + "' block lacks key '" + key + "'");
  return *v;
}

namespace io {

void write_header(std::ostream& out, const Header& header) {
  out << kMagic << ' ' << header.kind;
  for (const auto& [k, v] : header.entries) {
    if (k.find_first_of(" \t=") != std::string::npos ||
        v.find_first_of(" \t\n") != std::string::npos) {
      throw Error(ErrorKind::InvalidArgument, "header entry not representable: " + k);
    }
    out << ' ' << k << '=' << v;
  }
  out << '\n';
}

bool read_header(std::istream& in, Header& header) {
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = text::trim(line);
    if (t.empty()) continue;
    std::istringstream words(t);
    std::string hash;
    std::string magic;
    words >> hash >> magic;
    if (hash != "#" || magic != "lqrgaifo") bad("expected a '# lqrgaifo' header line");
    header = Header{};
    if (!(words >> header.kind)) bad("header lacks a block kind");
    std::string word;
    while (words >> word) {
      const auto eq = word.find('=');
      if (eq == std::string::npos) bad("malformed header entry '" + word + "'");
      header.entries.emplace_back(word.substr(0, eq), word.substr(eq + 1));
    }
    return true;
  }
  return false;
}

void write_trajectory(std::ostream& out, const Trajectory& traj,
                      const std::vector<Config::Entry>& extra) {
  const int d = traj.env.state_dim();
  const int m = traj.state_only() ? 0 : traj.env.action_dim();
  const int T = traj.horizon();
  if (T < 1 || (!traj.state_only() && static_cast<int>(traj.actions.size()) != T)) {
    throw Error(ErrorKind::InvalidArgument, "trajectory: |states| must equal |actions| + 1");
  }
  Header h{"trajectory",
           {{"state_dim", std::to_string(d)},
            {"action_dim", std::to_string(m)},
            {"horizon", std::to_string(T)},
            {"seed", std::to_string(traj.seed)}}};
  auto env = env_entries(traj.env);
  // The container horizon describes the rows; the env horizon is kept apart.
  for (auto& [k, v] : env) {
    if (k == "horizon") k = "env_horizon";
    h.entries.emplace_back(k, v);
  }
  h.entries.insert(h.entries.end(), extra.begin(), extra.end());
  write_header(out, h);
  for (int t = 0; t <= T; ++t) {
    if (traj.states[t].size() != d) {
      throw Error(ErrorKind::InvalidArgument, "trajectory: state dimension mismatch");
    }
    RowWriter row(out);
    row.label(t).values(traj.states[t]);
    if (t < T && m > 0) {
      row.values(traj.actions[t]);
    } else {
      row.empty(m);
    }
    row.end();
  }
  if (!out) bad("failed writing trajectory");
}

bool read_trajectory(std::istream& in, Trajectory& traj, Header* header) {
  Header h;
  if (!read_header(in, h)) return false;
  if (h.kind != "trajectory") bad("expected a trajectory block, found '" + h.kind + "'");
  // Drop the container horizon so env_from_entries sees the env horizon.
  std::vector<Config::Entry> env_only;
  for (const auto& e : h.entries) {
    if (e.first == "horizon") continue;
    env_only.emplace_back(e.first == "env_horizon" ? "horizon" : e.first, e.second);
  }
  Trajectory out;
  try {
    out.env = env_from_entries(env_only);
  } catch (const Error& e) {
    bad(std::string("trajectory header: ") + e.what());
  }
  const int d = header_int(h, "state_dim");
  const int m = header_int(h, "action_dim");
  const int T = header_int(h, "horizon");
  if (d != out.env.state_dim() || (m != 0 && m != out.env.action_dim()) || T < 1) {
    bad("trajectory header dimensions disagree with its environment");
  }
  out.seed = static_cast<std::uint64_t>(std::stoull(h.get("seed")));
  for (int t = 0; t <= T; ++t) {
    RowReader row(in, "trajectory row");
    if (row.label() != t) bad("trajectory rows out of order");
    out.states.push_back(row.vector(d));
    if (t < T && m > 0) {
      out.actions.push_back(row.vector(m));
    } else {
      row.expect_empty(m);
    }
    row.finish();
  }
  traj = std::move(out);
  if (header) *header = std::move(h);
  return true;
}

void save_trajectory(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path);
  if (!out) bad("cannot write '" + path + "'");
  write_trajectory(out, traj);
}

Trajectory load_trajectory(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open '" + path + "'");
  Trajectory traj;
  if (!read_trajectory(in, traj)) bad("'" + path + "' holds no trajectory");
  return traj;
}

void write_controller(std::ostream& out, const LinearGaussianController& ctrl) {
  ctrl.validate();
  const int d = ctrl.state_dim();
  const int m = ctrl.action_dim();
  write_header(out, {"controller",
                     {{"state_dim", std::to_string(d)},
                      {"action_dim", std::to_string(m)},
                      {"horizon", std::to_string(ctrl.horizon())}}});
  for (int t = 0; t < ctrl.horizon(); ++t) {
    RowWriter(out)
        .label(t)
        .values(ctrl.gain[t])
        .values(ctrl.offset[t])
        .values(ctrl.state_anchor[t])
        .values(ctrl.action_anchor[t])
        .values(ctrl.covariance[t])
        .end();
  }
  if (!out) bad("failed writing controller");
}

LinearGaussianController read_controller(std::istream& in) {
  const Header h = expect_header(in, "controller");
  const int d = header_int(h, "state_dim");
  const int m = header_int(h, "action_dim");
  const int T = header_int(h, "horizon");
  if (d < 1 || m < 1 || T < 1) bad("controller header has empty dimensions");
  LinearGaussianController c;
  for (int t = 0; t < T; ++t) {
    RowReader row(in, "controller row");
    if (row.label() != t) bad("controller rows out of order");
    c.gain.push_back(row.matrix(m, d));
    c.offset.push_back(row.vector(m));
    c.state_anchor.push_back(row.vector(d));
    c.action_anchor.push_back(row.vector(m));
    c.covariance.push_back(row.matrix(m, m));
    row.finish();
  }
  try {
    c.validate();
  } catch (const Error& e) {
    bad(e.what());
  }
  return c;
}

void save_controller(const std::string& path, const LinearGaussianController& ctrl) {
  std::ofstream out(path);
  if (!out) bad("cannot write '" + path + "'");
  write_controller(out, ctrl);
}

LinearGaussianController load_controller(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open '" + path + "'");
  return read_controller(in);
}

void write_dynamics(std::ostream& out, const TimeVaryingLinearDynamics& dyn) {
  const int d = dyn.state_dim();
  const int m = dyn.action_dim();
  write_header(out, {"dynamics",
                     {{"state_dim", std::to_string(d)},
                      {"action_dim", std::to_string(m)},
                      {"horizon", std::to_string(dyn.horizon())}}});
  for (int t = 0; t < dyn.horizon(); ++t) {
    RowWriter(out)
        .label(t)
        .values(dyn.transition[t])
        .values(dyn.bias[t])
        .values(dyn.covariance[t])
        .end();
  }
  RowWriter(out)
      .label(-1)
      .values(dyn.initial_state.mean)
      .values(dyn.initial_state.covariance)
      .end();
  if (!out) bad("failed writing dynamics");
}

TimeVaryingLinearDynamics read_dynamics(std::istream& in) {
  const Header h = expect_header(in, "dynamics");
  const int d = header_int(h, "state_dim");
  const int m = header_int(h, "action_dim");
  const int T = header_int(h, "horizon");
  TimeVaryingLinearDynamics dyn;
  for (int t = 0; t < T; ++t) {
    RowReader row(in, "dynamics row");
    if (row.label() != t) bad("dynamics rows out of order");
    dyn.transition.push_back(row.matrix(d, d + m));
    dyn.bias.push_back(row.vector(d));
    dyn.covariance.push_back(row.matrix(d, d));
    row.finish();
  }
  RowReader row(in, "dynamics initial-state row");
  if (row.label() != -1) bad("dynamics block lacks its initial-state row");
  dyn.initial_state.mean = row.vector(d);
  dyn.initial_state.covariance = row.matrix(d, d);
  row.finish();
  return dyn;
}

void write_discriminator(std::ostream& out, const DiscriminatorParams& params) {
  params.validate();
  write_header(out, {"discriminator",
                     {{"input_dim", std::to_string(params.input_dim())},
                      {"layers", std::to_string(params.layers.size())}}});
  for (const auto& layer : params.layers) {
    RowWriter(out)
        .label(layer.weight.rows())
        .value(static_cast<double>(layer.weight.cols()))
        .value(layer.activation == Activation::Tanh ? 0.0 : 1.0)
        .values(layer.weight)
        .values(layer.bias)
        .end();
  }
  const InputNormalizer& n = params.normalizer;
  RowWriter(out)
      .label(-1)
      .value(n.count)
      .value(n.min_scale)
      .values(n.mean)
      .values(n.m2)
      .end();
  if (!out) bad("failed writing discriminator");
}

DiscriminatorParams read_discriminator(std::istream& in) {
  const Header h = expect_header(in, "discriminator");
  const int input = header_int(h, "input_dim");
  const int count = header_int(h, "layers");
  DiscriminatorParams p;
  for (int l = 0; l < count; ++l) {
    RowReader row(in, "discriminator layer row");
    const long long rows = row.label();
    const double cols = row.value();
    const double act = row.value();
    if (rows < 1 || cols < 1 || (act != 0.0 && act != 1.0)) bad("bad discriminator layer row");
    DenseLayer layer;
    layer.weight = row.matrix(rows, static_cast<Eigen::Index>(cols));
    layer.bias = row.vector(rows);
    layer.activation = act == 0.0 ? Activation::Tanh : Activation::Identity;
    row.finish();
    p.layers.push_back(std::move(layer));
  }
  RowReader row(in, "discriminator normalizer row");
  if (row.label() != -1) bad("discriminator block lacks its normalizer row");
  p.normalizer.count = row.value();
  p.normalizer.min_scale = row.value();
  p.normalizer.mean = row.vector(input);
  p.normalizer.m2 = row.vector(input);
  row.finish();
  try {
    p.validate();
  } catch (const Error& e) {
    bad(e.what());
  }
  return p;
}

}  // namespace io
}  // namespace lqrgaifo
