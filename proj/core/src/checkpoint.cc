// Copyright 2026 The meshkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "meshkit/checkpoint.h"

#include "meshkit/io.h"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace meshkit {

namespace {

void write_tensor(std::ostream& out, const char* kind, const std::string& name,
                  const Matrix& m) {
  out << "tensor " << kind << ' ' << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
  char buf[32];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const auto r = std::to_chars(buf, buf + sizeof(buf), m(i, j));
      if (j) out << ' ';
      out.write(buf, r.ptr - buf);
    }
    out << '\n';
  }
}

struct Reader {
  std::istream& in;
  int line = 0;
  std::string text;

  bool next() {
    if (!std::getline(in, text)) return false;
    ++line;
    return true;
  }
  void expect_next(const char* what) {
    if (!next()) throw ParseError(std::string("truncated checkpoint: expected ") + what, line + 1);
  }
};

}  // namespace

void write_checkpoint(std::ostream& out, const Model& model) {
  const std::string config = model.config().to_text();
  int lines = 0;
  for (char c : config) lines += c == '\n';
  out << "meshkit-checkpoint " << kCheckpointVersion << '\n';
  out << "config " << lines << '\n' << config;
  for (const Parameter& p : model.store().parameters()) write_tensor(out, "param", p.name, p.value);
  for (const Buffer& b : model.store().buffers()) write_tensor(out, "buffer", b.name, b.value);
  out << "end\n";
}

void save_checkpoint(const std::filesystem::path& path, const Model& model) {
  std::ostringstream s;
  write_checkpoint(s, model);
  write_file_atomic(path, s.str());
}

std::unique_ptr<Model> read_checkpoint(std::istream& in) {
  Reader r{in, 0, {}};
  r.expect_next("header");
  {
    std::istringstream h(r.text);
    std::string magic;
    int version = 0;
    if (!(h >> magic >> version) || magic != "meshkit-checkpoint") {
      throw ParseError("not a meshkit checkpoint", r.line);
    }
    if (version != kCheckpointVersion) throw ParseError("unsupported checkpoint version", r.line);
  }
  r.expect_next("config");
  int lines = 0;
  {
    std::istringstream h(r.text);
    std::string word;
    if (!(h >> word >> lines) || word != "config" || lines < 0) {
      throw ParseError("expected config block", r.line);
    }
  }
  std::string config_text;
  for (int i = 0; i < lines; ++i) {
    r.expect_next("config line");
    config_text += r.text + '\n';
  }
  std::istringstream cs(config_text);
  const KeyValueConfig kv = KeyValueConfig::parse(cs);
  kv.require_known(NetworkConfig::keys());
  NetworkConfig config;
  try {
    config = NetworkConfig::from_config(kv);
  } catch (const ArgumentError& e) {
    throw ParseError(std::string("bad config echo: ") + e.what(), r.line);
  }
  auto model = std::make_unique<Model>(config, 0);
  std::map<std::string, Matrix*> params, buffers;
  for (Parameter& p : model->store().parameters()) params[p.name] = &p.value;
  for (Buffer& b : model->store().buffers()) buffers[b.name] = &b.value;
  for (;;) {
    r.expect_next("tensor or end");
    if (r.text == "end") break;
    std::istringstream h(r.text);
    std::string word, kind, name;
    long rows = -1, cols = -1;
    if (!(h >> word >> kind >> name >> rows >> cols) || word != "tensor") {
      throw ParseError("expected tensor header", r.line);
    }
    auto& table = kind == "param" ? params : buffers;
    if (kind != "param" && kind != "buffer") throw ParseError("unknown tensor kind", r.line);
    const auto it = table.find(name);
    if (it == table.end()) throw ParseError("unexpected tensor '" + name + "'", r.line);
    Matrix& target = *it->second;
    if (rows != target.rows() || cols != target.cols()) {
      throw ParseError("shape mismatch for '" + name + "'", r.line);
    }
    for (long i = 0; i < rows; ++i) {
      r.expect_next("tensor row");
      const char* p = r.text.data();
      const char* end = p + r.text.size();
      for (long j = 0; j < cols; ++j) {
        while (p < end && *p == ' ') ++p;
        double v = 0.0;
        const auto res = std::from_chars(p, end, v);
        if (res.ec != std::errc()) throw ParseError("bad number in '" + name + "'", r.line);
        target(i, j) = v;
        p = res.ptr;
      }
      while (p < end && *p == ' ') ++p;
      if (p != end) throw ParseError("too many values in '" + name + "'", r.line);
    }
    table.erase(it);
  }
  if (!params.empty() || !buffers.empty()) {
    throw ParseError("checkpoint is missing tensors", r.line);
  }
  return model;
}

std::unique_ptr<Model> load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open checkpoint '" + path.string() + "'", 0);
  return read_checkpoint(in);
}

}  // namespace meshkit
