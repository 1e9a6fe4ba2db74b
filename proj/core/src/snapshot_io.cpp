#include "mgsim/snapshot_io.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "mgsim/errors.hpp"

namespace mgsim::io {

static_assert(std::endian::native == std::endian::little, "snapshot files are written in host byte order");

namespace {

constexpr std::uint32_t kVersion = 1;

class Writer {
 public:
  explicit Writer(const std::filesystem::path& p) : path_(p), out_(p, std::ios::binary | std::ios::trunc) {
    if (!out_) throw IoError("cannot open " + p.string() + " for writing");
  }
  template <class T>
  void put(const T& v) {
    out_.write(reinterpret_cast<const char*>(&v), sizeof(T));
  }
  void bytes(const void* p, std::size_t n) { out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n)); }
  void close() {
    out_.close();
    if (!out_) throw IoError("write failed: " + path_.string());
  }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

class Reader {
 public:
  explicit Reader(const std::filesystem::path& p) : path_(p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot open " + p.string());
    buf_.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  template <class T>
  T get() {
    T v;
    bytes(&v, sizeof(T));
    return v;
  }
  void bytes(void* dst, std::size_t n) {
    if (pos_ + n > buf_.size()) throw IoError(path_.string() + ": truncated");
    std::memcpy(dst, buf_.data() + pos_, n);
    pos_ += n;
  }
  std::size_t remaining() const noexcept { return buf_.size() - pos_; }
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
  std::vector<char> buf_;
  std::size_t pos_ = 0;
};

void put_header(Writer& w, const char* magic, const Grid& g) {
  w.bytes(magic, 4);
  w.put(kVersion);
  w.put(static_cast<std::uint32_t>(g.dim()));
  for (int a = 0; a < g.dim(); ++a) w.put(static_cast<std::uint32_t>(g.n(a)));
}

Grid get_header(Reader& r, const char* magic) {
  char m[4];
  if (r.remaining() < 4) throw IoError(r.path().string() + ": truncated");
  r.bytes(m, 4);
  if (std::memcmp(m, magic, 4) != 0) throw IoError(r.path().string() + ": bad magic");
  const auto version = r.get<std::uint32_t>();
  if (version != kVersion) throw IoError(r.path().string() + ": unsupported version " + std::to_string(version));
  const auto d = r.get<std::uint32_t>();
  if (d < 2 || d > 3) throw IoError(r.path().string() + ": unsupported dimension " + std::to_string(d));
  std::vector<int> dims(d);
  for (auto& n : dims) {
    const auto v = r.get<std::uint32_t>();
    if (v == 0 || v > (1u << 16)) throw IoError(r.path().string() + ": bad grid size");
    n = static_cast<int>(v);
  }
  try {
    return Grid(std::span<const int>(dims));
  } catch (const std::invalid_argument& e) {
    throw IoError(r.path().string() + ": " + e.what());
  }
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const PhysicalField& f, double time, double kappa,
                    double epsilon) {
  Writer w(path);
  put_header(w, "ASF1", f.grid());
  w.put(time);
  w.put(kappa);
  w.put(epsilon);
  w.bytes(f.data(), f.grid().size() * sizeof(double));
  w.close();
}

Snapshot read_snapshot(const std::filesystem::path& path, const std::optional<Grid>& expect) {
  Reader r(path);
  const Grid g = get_header(r, "ASF1");
  if (expect && !(*expect == g)) throw IoError(path.string() + ": grid does not match the expected dimensions");
  Snapshot s{PhysicalField(g)};
  s.time = r.get<double>();
  s.kappa = r.get<double>();
  s.epsilon = r.get<double>();
  if (r.remaining() != g.size() * sizeof(double)) throw IoError(path.string() + ": truncated");
  r.bytes(s.field.data(), g.size() * sizeof(double));
  return s;
}

std::string snapshot_filename(int index) {
  std::string digits = std::to_string(index);
  if (digits.size() < 5) digits.insert(0, 5 - digits.size(), '0');
  return "snap_" + digits + ".asf";
}

diag::SnapshotSeries load_series(const std::filesystem::path& dir, const std::string& operator_kind) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw IoError(dir.string() + ": not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".asf") files.push_back(e.path());
  if (files.size() < 2) throw IoError(dir.string() + ": fewer than 2 snapshot files");
  std::sort(files.begin(), files.end());

  std::vector<Snapshot> snaps;
  for (const auto& f : files) {
    std::optional<Grid> expect;
    if (!snaps.empty()) expect = snaps.front().field.grid();
    snaps.push_back(read_snapshot(f, expect));
  }
  std::stable_sort(snaps.begin(), snaps.end(), [](const Snapshot& a, const Snapshot& b) { return a.time < b.time; });
  std::vector<double> times;
  std::vector<PhysicalField> fields;
  for (auto& s : snaps) {
    times.push_back(s.time);
    fields.push_back(std::move(s.field));
  }
  diag::SeriesMetadata meta{snaps.front().kappa, snaps.front().epsilon, operator_kind};
  const Grid grid = fields.front().grid();
  try {
    return diag::SnapshotSeries(grid, std::move(times), std::move(fields), meta);
  } catch (const std::invalid_argument& e) {
    throw IoError(dir.string() + ": " + e.what());
  }
}

void write_symbol(const std::filesystem::path& path, const velocity::MultiplierSymbol& m) {
  Writer w(path);
  put_header(w, "MSY1", m.grid());
  const auto t = m.table();
  w.bytes(t.data(), t.size() * sizeof(Complex));
  w.close();
}

velocity::MultiplierSymbol read_symbol(const std::filesystem::path& path, const Grid& expect) {
  Reader r(path);
  const Grid g = get_header(r, "MSY1");
  if (!(g == expect)) throw IoError(path.string() + ": symbol grid does not match the run grid");
  const std::size_t n = g.size() * static_cast<std::size_t>(g.dim());
  if (r.remaining() != n * sizeof(Complex)) throw IoError(path.string() + ": truncated");
  std::vector<Complex> table(n);
  r.bytes(table.data(), n * sizeof(Complex));
  return velocity::custom_symbol(g, std::move(table));
}

}  // namespace mgsim::io
