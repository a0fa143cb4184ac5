#include "finn/io/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "finn/errors.hpp"
#include "finn/io/kv.hpp"

namespace finn::io {
namespace {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes little-endian");

template <class T>
void put(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

class Reader {
 public:
  Reader(const std::string& data, const std::string& source) : data_(data), source_(source) {}

  template <class T>
  T get() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, data_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::string bytes(std::size_t n) {
    need(n);
    std::string s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n)
      throw FormatError(source_ + ": truncated checkpoint at byte " + std::to_string(pos_));
  }
  const std::string& data_;
  std::string source_;
  std::size_t pos_ = 0;
};

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const ParamStore& params) {
  std::string out(kCheckpointMagic, sizeof kCheckpointMagic);
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(params.size()));
  for (const auto& t : params.tensors()) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(t.name.size()));
    out += t.name;
    put<std::uint8_t>(out, t.trainable ? 1 : 0);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(t.shape.size()));
    for (auto d : t.shape) put<std::uint64_t>(out, d);
    for (double v : t.values) put<double>(out, v);
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  write_text(tmp, out);
  std::filesystem::rename(tmp, path);
}

ParamStore load_checkpoint(const std::filesystem::path& path) {
  const std::string data = read_text(path);
  const std::string src = path.string();
  Reader r(data, src);
  if (r.bytes(sizeof kCheckpointMagic) != std::string(kCheckpointMagic, sizeof kCheckpointMagic))
    throw FormatError(src + ": not a checkpoint (bad magic)");
  const auto version = r.get<std::uint32_t>();
  if (version != kCheckpointVersion)
    throw FormatError(src + ": unsupported checkpoint version " + std::to_string(version));
  const auto count = r.get<std::uint32_t>();

  ParamStore store;
  for (std::uint32_t k = 0; k < count; ++k) {
    const auto name_len = r.get<std::uint32_t>();
    std::string name = r.bytes(name_len);
    const bool trainable = r.get<std::uint8_t>() != 0;
    const auto rank = r.get<std::uint32_t>();
    std::vector<std::size_t> shape(rank);
    std::size_t numel = 1;
    for (auto& d : shape) {
      d = static_cast<std::size_t>(r.get<std::uint64_t>());
      if (d > data.size()) throw FormatError(src + ": implausible dimension in tensor '" + name + "'");
      numel *= d;
    }
    if (numel > data.size()) throw FormatError(src + ": implausible size of tensor '" + name + "'");
    std::vector<double> values(numel);
    for (auto& v : values) v = r.get<double>();
    try {
      store.add(std::move(name), std::move(shape), std::move(values), trainable);
    } catch (const Error& e) {
      throw FormatError(src + ": " + e.what());
    }
  }
  if (!r.done()) throw FormatError(src + ": trailing bytes after the last tensor");
  return store;
}

}  // namespace finn::io
