#include <cstdio>
#include <fstream>

#include "spinrc/errors.hpp"
#include "spinrc/tasks.hpp"

namespace spinrc {

namespace {

constexpr std::uint32_t kImagesMagic = 0x00000803;  // 2051
constexpr std::uint32_t kLabelsMagic = 0x00000801;  // 2049

std::uint32_t read_be32(std::istream& in, const std::string& what) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw TruncatedFile("idx: truncated while reading " + what);
  return (static_cast<std::uint32_t>(b[0]) << 24) | (static_cast<std::uint32_t>(b[1]) << 16) |
         (static_cast<std::uint32_t>(b[2]) << 8) | static_cast<std::uint32_t>(b[3]);
}

void write_be32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v >> 24), static_cast<unsigned char>(v >> 16),
                        static_cast<unsigned char>(v >> 8), static_cast<unsigned char>(v)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

}  // namespace

ImageDataset load_mnist_idx(const std::string& images_path, const std::string& labels_path) {
  std::ifstream imgs(images_path, std::ios::binary);
  if (!imgs) throw DataError("idx: cannot open images file " + images_path);
  std::uint32_t magic = read_be32(imgs, "images magic");
  if (magic != kImagesMagic)
    throw BadMagic("idx: images file has magic " + std::to_string(magic) + ", expected 2051");
  std::uint32_t count = read_be32(imgs, "image count");
  std::uint32_t rows = read_be32(imgs, "image rows");
  std::uint32_t cols = read_be32(imgs, "image cols");
  if (rows != 28 || cols != 28)
    throw DimensionMismatch("idx: expected 28x28 images, got " + std::to_string(rows) + "x" +
                            std::to_string(cols));

  ImageDataset d;
  d.count = count;
  d.pixels.resize(static_cast<std::size_t>(count) * 784);
  imgs.read(reinterpret_cast<char*>(d.pixels.data()),
            static_cast<std::streamsize>(d.pixels.size()));
  if (imgs.gcount() != static_cast<std::streamsize>(d.pixels.size()))
    throw TruncatedFile("idx: images payload shorter than the declared count");

  std::ifstream labs(labels_path, std::ios::binary);
  if (!labs) throw DataError("idx: cannot open labels file " + labels_path);
  std::uint32_t lmagic = read_be32(labs, "labels magic");
  if (lmagic != kLabelsMagic)
    throw BadMagic("idx: labels file has magic " + std::to_string(lmagic) + ", expected 2049");
  std::uint32_t lcount = read_be32(labs, "label count");
  if (lcount != count)
    throw CountMismatch("idx: " + std::to_string(count) + " images but " +
                        std::to_string(lcount) + " labels");
  std::vector<std::uint8_t> raw(lcount);
  labs.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (labs.gcount() != static_cast<std::streamsize>(raw.size()))
    throw TruncatedFile("idx: labels payload shorter than the declared count");
  d.labels.reserve(lcount);
  for (std::uint8_t v : raw) {
    if (v > 9) throw OutOfRange("idx: label byte outside 0..9");
    d.labels.push_back(v);
  }
  return d;
}

void write_mnist_idx(const ImageDataset& dataset, const std::string& images_path,
                     const std::string& labels_path) {
  if (dataset.labels.size() != dataset.count || dataset.pixels.size() != dataset.count * 784)
    throw CountMismatch("idx write: dataset fields disagree on the sample count");
  std::ofstream imgs(images_path, std::ios::binary);
  if (!imgs) throw DataError("idx: cannot create " + images_path);
  write_be32(imgs, kImagesMagic);
  write_be32(imgs, static_cast<std::uint32_t>(dataset.count));
  write_be32(imgs, 28);
  write_be32(imgs, 28);
  imgs.write(reinterpret_cast<const char*>(dataset.pixels.data()),
             static_cast<std::streamsize>(dataset.pixels.size()));

  std::ofstream labs(labels_path, std::ios::binary);
  if (!labs) throw DataError("idx: cannot create " + labels_path);
  write_be32(labs, kLabelsMagic);
  write_be32(labs, static_cast<std::uint32_t>(dataset.count));
  for (int v : dataset.labels) labs.put(static_cast<char>(v));
}

}  // namespace spinrc
