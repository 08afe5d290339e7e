// Copyright 2026 The RiskCast Authors
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

#include "riskcast/model_io.h"

#include <charconv>
#include <fstream>
#include <sstream>
#include <type_traits>

#include "riskcast/csv.h"
#include "riskcast/error.h"

namespace riskcast {
namespace {

// Names are written as bare tokens.
const std::string& Token(const std::string& name) {
  if (name.empty() || name.find_first_of(" \t\r\n") != std::string::npos) {
    throw ParameterError("cannot serialize name '" + name + "'");
  }
  return name;
}

void WriteNames(std::ostream& out, const char* key,
                const std::vector<std::string>& names) {
  out << key << ' ' << names.size();
  for (const auto& n : names) out << ' ' << Token(n);
  out << '\n';
}

void WriteTensor(std::ostream& out, const std::string& name, const Tensor& t) {
  out << "param " << name;
  for (std::size_t d : t.shape()) out << ' ' << d;
  out << '\n';
  for (double v : t.values()) out << FormatDouble(v) << '\n';
}

void WritePreprocessing(std::ostream& out, const Preprocessing& p) {
  const FeatureConfig& f = p.features;
  out << "features window " << f.window << " horizon " << f.horizon
      << " vol_window " << f.vol_window << '\n';
  out << "ma_windows " << f.ma_windows.size();
  for (std::size_t w : f.ma_windows) out << ' ' << w;
  out << '\n';
  WriteNames(out, "policy_vocabulary", f.policy_vocabulary);
  WriteNames(out, "seq_columns", p.seq_columns);
  WriteNames(out, "static_columns", p.static_columns);
  out << "blocks " << p.market_features << ' ' << p.sentiment_features << '\n';
  out << "stats " << p.stats.columns.size() << '\n';
  for (std::size_t i = 0; i < p.stats.columns.size(); ++i) {
    out << "stat " << Token(p.stats.columns[i]) << ' '
        << FormatDouble(p.stats.mean[i]) << ' ' << FormatDouble(p.stats.stddev[i])
        << ' ' << (p.stats.zero_variance[i] ? 1 : 0) << '\n';
  }
  out << "target " << FormatDouble(p.target.min) << ' ' << FormatDouble(p.target.max)
      << '\n';
  out << "split " << FormatDouble(p.split.train) << ' ' << FormatDouble(p.split.val)
      << ' ' << FormatDouble(p.split.test) << '\n';
  out << "counts " << p.counts.train << ' ' << p.counts.val << ' ' << p.counts.test
      << '\n';
  out << "dates " << FormatDate(p.train_end) << ' ' << FormatDate(p.test_begin) << '\n';
}

class Reader {
 public:
  Reader(std::istream& in, std::string source) : source_(std::move(source)) {
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines_.push_back(std::move(line));
      partial_tail_ = in.eof();  // last line had no newline
    }
  }

  std::string Line() {
    if (pos_ >= lines_.size()) Fail("unexpected end of file (truncated model?)");
    return lines_[pos_++];
  }

  // Next line split into tokens; the first must equal `key`.
  std::vector<std::string> Record(std::string_view key) {
    std::istringstream ss(Line());
    std::vector<std::string> toks;
    for (std::string t; ss >> t;) toks.push_back(std::move(t));
    if (toks.empty() || toks[0] != key) {
      Fail("expected '" + std::string(key) + "'");
    }
    toks.erase(toks.begin());
    return toks;
  }

  std::vector<std::string> Record(std::string_view key, std::size_t count) {
    auto toks = Record(key);
    if (toks.size() != count) {
      Fail("'" + std::string(key) + "' needs " + std::to_string(count) + " fields");
    }
    return toks;
  }

  double Number(const std::string& text) {
    double v = 0.0;
    if (!ParseDouble(text, v)) Fail("bad number '" + text + "'");
    return v;
  }

  std::size_t Count(const std::string& text) {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
      Fail("bad count '" + text + "'");
    }
    return v;
  }

  // Reads "key N a b c" into a name list.
  std::vector<std::string> Names(std::string_view key) {
    auto toks = Record(key);
    if (toks.empty() || Count(toks[0]) != toks.size() - 1) {
      Fail("'" + std::string(key) + "' count does not match its entries");
    }
    return {toks.begin() + 1, toks.end()};
  }

  // Key/value pairs "k1 v1 k2 v2" in the given order.
  std::vector<std::size_t> Fields(std::string_view key,
                                  const std::vector<std::string>& names) {
    auto toks = Record(key, names.size() * 2);
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (toks[2 * i] != names[i]) Fail("expected field '" + names[i] + "'");
      out.push_back(Count(toks[2 * i + 1]));
    }
    return out;
  }

  void ReadTensor(const std::string& name, Tensor& into) {
    auto toks = Record("param");
    if (toks.empty() || toks[0] != name) Fail("expected parameter '" + name + "'");
    Shape shape;
    for (std::size_t i = 1; i < toks.size(); ++i) shape.push_back(Count(toks[i]));
    if (shape != into.shape()) {
      Fail("parameter '" + name + "' has shape " + ShapeString(shape) +
           ", model expects " + ShapeString(into.shape()));
    }
    for (double& v : into.values()) v = Number(Line());
  }

  [[noreturn]] void Fail(const std::string& what) const {
    if (partial_tail_ && pos_ == lines_.size()) {
      throw SchemaError(source_ + ":" + std::to_string(pos_) + ": " + what +
                        "; file ends mid-line (truncated model?)");
    }
    throw SchemaError(source_ + ":" + std::to_string(pos_) + ": " + what);
  }

 private:
  std::string source_;
  std::vector<std::string> lines_;
  std::size_t pos_ = 0;
  bool partial_tail_ = false;
};

Date ReadDate(Reader& r, const std::string& text) {
  try {
    return ParseDate(text);
  } catch (const SchemaError& e) {
    r.Fail(e.what());
  }
}

Preprocessing ReadPreprocessing(Reader& r) {
  Preprocessing p;
  auto f = r.Fields("features", {"window", "horizon", "vol_window"});
  p.features.window = f[0];
  p.features.horizon = f[1];
  p.features.vol_window = f[2];
  auto ma = r.Names("ma_windows");
  p.features.ma_windows.clear();
  for (const auto& w : ma) p.features.ma_windows.push_back(r.Count(w));
  p.features.policy_vocabulary = r.Names("policy_vocabulary");
  p.seq_columns = r.Names("seq_columns");
  p.static_columns = r.Names("static_columns");
  auto blocks = r.Record("blocks", 2);
  p.market_features = r.Count(blocks[0]);
  p.sentiment_features = r.Count(blocks[1]);
  if (p.market_features + p.sentiment_features != p.seq_columns.size()) {
    r.Fail("feature blocks do not add up to the sequence columns");
  }
  const std::size_t n_stats = r.Count(r.Record("stats", 1)[0]);
  for (std::size_t i = 0; i < n_stats; ++i) {
    auto s = r.Record("stat", 4);
    p.stats.columns.push_back(s[0]);
    p.stats.mean.push_back(r.Number(s[1]));
    p.stats.stddev.push_back(r.Number(s[2]));
    p.stats.zero_variance.push_back(r.Count(s[3]) != 0);
  }
  auto t = r.Record("target", 2);
  p.target = {r.Number(t[0]), r.Number(t[1])};
  auto s = r.Record("split", 3);
  p.split = {r.Number(s[0]), r.Number(s[1]), r.Number(s[2])};
  auto c = r.Record("counts", 3);
  p.counts = {r.Count(c[0]), r.Count(c[1]), r.Count(c[2])};
  auto d = r.Record("dates", 2);
  p.train_end = ReadDate(r, d[0]);
  p.test_begin = ReadDate(r, d[1]);
  try {
    p.features.Validate();
  } catch (const ParameterError& e) {
    r.Fail(e.what());
  }
  return p;
}

}  // namespace

std::string SerializeModel(const ModelFile& file) {
  std::ostringstream out;
  out << kModelMagic << '\n';
  std::visit(
      [&out](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, HybridModel>) {
          const HybridDims& d = m.dims();
          out << "kind hybrid\n";
          out << "dims window " << d.window << " market " << d.market_features
              << " sentiment " << d.sentiment_features << " static "
              << d.static_features << " conv_width " << d.conv_width
              << " conv_channels " << d.conv_channels << " hidden " << d.hidden
              << '\n';
          out << "dropout " << FormatDouble(m.dropout().p) << '\n';
          HybridModel copy = m;
          for (const ParamRef& p : copy.Parameters()) WriteTensor(out, p.name, *p.value);
        } else {
          out << "kind linreg\n";
          out << "dims window " << m.window << " seq " << m.seq_features
              << " static " << m.static_features << '\n';
          out << "lambda " << FormatDouble(m.lambda) << '\n';
          out << "bias " << FormatDouble(m.bias) << '\n';
          WriteTensor(out, "weights", Tensor::Vector(m.weights));
        }
      },
      file.model);
  out << "preprocessing " << (file.preprocessing ? 1 : 0) << '\n';
  if (file.preprocessing) WritePreprocessing(out, *file.preprocessing);
  out << "end\n";
  return out.str();
}

ModelFile ParseModel(std::istream& in, const std::string& source) {
  Reader r(in, source);
  const std::string magic = r.Line();
  if (magic != kModelMagic) {
    if (magic.rfind("RISKCAST-MODEL", 0) == 0) {
      r.Fail("unsupported model format '" + magic + "' (expected '" +
             kModelMagic + "')");
    }
    r.Fail("not a model file");
  }
  const std::string kind = r.Record("kind", 1)[0];
  std::optional<AnyModel> model;
  if (kind == "hybrid") {
    auto f = r.Fields("dims", {"window", "market", "sentiment", "static",
                               "conv_width", "conv_channels", "hidden"});
    HybridDims dims{f[0], f[1], f[2], f[3], f[4], f[5], f[6]};
    const double p = r.Number(r.Record("dropout", 1)[0]);
    std::optional<HybridModel> m;
    try {
      m.emplace(dims, p);
    } catch (const Error& e) {
      r.Fail(e.what());
    }
    for (const ParamRef& ref : m->Parameters()) r.ReadTensor(ref.name, *ref.value);
    model = std::move(*m);
  } else if (kind == "linreg") {
    auto f = r.Fields("dims", {"window", "seq", "static"});
    LinearRegressionModel m;
    m.window = f[0];
    m.seq_features = f[1];
    m.static_features = f[2];
    m.lambda = r.Number(r.Record("lambda", 1)[0]);
    m.bias = r.Number(r.Record("bias", 1)[0]);
    if (m.input_size() == 0) r.Fail("linear model has no inputs");
    Tensor w(Shape{m.input_size()});
    r.ReadTensor("weights", w);
    m.weights.assign(w.values().begin(), w.values().end());
    model = std::move(m);
  } else {
    r.Fail("unknown model kind '" + kind + "'");
  }
  ModelFile file{std::move(*model), std::nullopt};
  const std::string has_prep = r.Record("preprocessing", 1)[0];
  if (has_prep == "1") {
    file.preprocessing = ReadPreprocessing(r);
  } else if (has_prep != "0") {
    r.Fail("preprocessing flag must be 0 or 1");
  }
  r.Record("end", 0);
  return file;
}

void SaveModel(const ModelFile& file, const std::filesystem::path& path) {
  const std::string text = SerializeModel(file);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write model file " + path.string());
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing model file " + path.string());
}

ModelFile LoadModel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file " + path.string());
  return ParseModel(in, path.string());
}

}  // namespace riskcast
