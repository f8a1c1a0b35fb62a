#include "io/pfm.hpp"

#include <cstdio>
#include <cstring>
#include <memory>

namespace lexstereo {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void fail(const std::string& path, std::FILE* f, const std::string& what) {
  const long off = f ? std::ftell(f) : -1;
  throw PfmError(path + ": " + what + " (byte offset " + std::to_string(off) + ")");
}

// One whitespace-delimited header token.
std::string next_token(std::FILE* f, const std::string& path) {
  std::string tok;
  int c;
  while ((c = std::fgetc(f)) != EOF && std::isspace(c)) {
  }
  if (c == EOF) fail(path, f, "unexpected end of header");
  do {
    tok.push_back(static_cast<char>(c));
  } while ((c = std::fgetc(f)) != EOF && !std::isspace(c));
  return tok;
}

}  // namespace

Array2D<float> read_pfm(const std::string& path) {
  FilePtr f(std::fopen(path.c_str(), "rb"));
  if (!f) throw PfmError(path + ": cannot open");

  const std::string magic = next_token(f.get(), path);
  if (magic == "PF") fail(path, f.get(), "color PFM is not supported");
  if (magic != "Pf") fail(path, f.get(), "bad magic '" + magic + "'");

  int w = 0, h = 0;
  try {
    w = std::stoi(next_token(f.get(), path));
    h = std::stoi(next_token(f.get(), path));
  } catch (const std::exception&) {
    fail(path, f.get(), "malformed dimensions");
  }
  if (w <= 0 || h <= 0) fail(path, f.get(), "non-positive dimensions");

  double scale = 0;
  try {
    scale = std::stod(next_token(f.get(), path));
  } catch (const std::exception&) {
    fail(path, f.get(), "malformed scale");
  }
  if (scale == 0) fail(path, f.get(), "zero scale");
  const bool little_endian = scale < 0;

  Array2D<float> img(w, h);
  std::vector<float> row(w);
  for (int y = h - 1; y >= 0; --y) {  // stored bottom-to-top
    if (std::fread(row.data(), sizeof(float), w, f.get()) != static_cast<size_t>(w)) {
      fail(path, f.get(), "truncated payload");
    }
    if (!little_endian) {
      for (float& v : row) {
        uint32_t u;
        std::memcpy(&u, &v, 4);
        u = __builtin_bswap32(u);
        std::memcpy(&v, &u, 4);
      }
    }
    std::memcpy(img.row(y), row.data(), sizeof(float) * w);
  }
  return img;
}

void write_pfm(const Array2D<float>& image, const std::string& path) {
  FilePtr f(std::fopen(path.c_str(), "wb"));
  if (!f) throw PfmError(path + ": cannot open for writing");
  std::fprintf(f.get(), "Pf\n%d %d\n-1.0\n", image.width(), image.height());
  for (int y = image.height() - 1; y >= 0; --y) {
    if (std::fwrite(image.row(y), sizeof(float), image.width(), f.get()) !=
        static_cast<size_t>(image.width())) {
      throw PfmError(path + ": short write");
    }
  }
}

}  // namespace lexstereo
