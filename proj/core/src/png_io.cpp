#include "amrf/png_io.hpp"

#include <png.h>

#include <cstdio>
#include <cstring>

#include "amrf/fsutil.hpp"

namespace amrf {
namespace {

struct PngReader {
  png_structp png = nullptr;
  png_infop info = nullptr;
  FILE* file = nullptr;

  ~PngReader() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    if (file) std::fclose(file);
  }
};

struct PngWriter {
  png_structp png = nullptr;
  png_infop info = nullptr;

  ~PngWriter() {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
  }
};

void append_bytes(png_structp png, png_bytep data, png_size_t length) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + length);
}

void flush_noop(png_structp) {}

// Opens the file and reads the header; the caller applies transforms.
void open_png(PngReader& r, const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    raise(ErrorCode::FileNotFound, path.string());
  }
  r.file = std::fopen(path.string().c_str(), "rb");
  if (!r.file) raise(ErrorCode::IoError, "cannot open " + path.string());

  unsigned char header[8];
  if (std::fread(header, 1, 8, r.file) != 8 || png_sig_cmp(header, 0, 8) != 0) {
    raise(ErrorCode::DecodeError, "not a PNG file: " + path.string());
  }

  r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  r.info = r.png ? png_create_info_struct(r.png) : nullptr;
  if (!r.png || !r.info) raise(ErrorCode::IoError, "libpng allocation failed");
  if (setjmp(png_jmpbuf(r.png))) {
    raise(ErrorCode::DecodeError, "corrupt PNG: " + path.string());
  }
  png_init_io(r.png, r.file);
  png_set_sig_bytes(r.png, 8);
  png_read_info(r.png, r.info);
}

std::vector<std::uint8_t> encode_png(const std::uint8_t* pixels, int width, int height,
                                     int color_type) {
  PngWriter w;
  w.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  w.info = w.png ? png_create_info_struct(w.png) : nullptr;
  if (!w.png || !w.info) raise(ErrorCode::IoError, "libpng allocation failed");

  std::vector<std::uint8_t> out;
  if (setjmp(png_jmpbuf(w.png))) {
    raise(ErrorCode::IoError, "PNG encoding failed");
  }
  png_set_write_fn(w.png, &out, append_bytes, flush_noop);
  png_set_IHDR(w.png, w.info, width, height, 8, color_type, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  // Fixed settings keep the encoded bytes stable across runs.
  png_set_compression_level(w.png, 6);
  png_write_info(w.png, w.info);

  const int stride = width * (color_type == PNG_COLOR_TYPE_RGB ? 3 : 1);
  std::vector<png_bytep> rows(height);
  for (int y = 0; y < height; ++y) {
    rows[y] = const_cast<png_bytep>(pixels + static_cast<std::size_t>(y) * stride);
  }
  png_write_image(w.png, rows.data());
  png_write_end(w.png, nullptr);
  return out;
}

}  // namespace

ImageBuffer load_image(const std::filesystem::path& path) {
  PngReader r;
  open_png(r, path);
  if (setjmp(png_jmpbuf(r.png))) {
    raise(ErrorCode::DecodeError, "corrupt PNG: " + path.string());
  }

  const int bit_depth = png_get_bit_depth(r.png, r.info);
  if (bit_depth == 16) {
    raise(ErrorCode::DecodeError, "16-bit PNG not supported: " + path.string());
  }
  const int color_type = png_get_color_type(r.png, r.info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(r.png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(r.png);
  if (color_type == PNG_COLOR_TYPE_GRAY || color_type == PNG_COLOR_TYPE_GRAY_ALPHA) {
    png_set_gray_to_rgb(r.png);
  }
  if (png_get_valid(r.png, r.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(r.png);
  png_set_strip_alpha(r.png);
  png_read_update_info(r.png, r.info);

  const int width = static_cast<int>(png_get_image_width(r.png, r.info));
  const int height = static_cast<int>(png_get_image_height(r.png, r.info));
  if (png_get_channels(r.png, r.info) != 3) {
    raise(ErrorCode::DecodeError, "unsupported channel layout: " + path.string());
  }

  ImageBuffer image(width, height);
  std::vector<png_bytep> rows(height);
  for (int y = 0; y < height; ++y) {
    rows[y] = image.data.data() + static_cast<std::size_t>(y) * width * 3;
  }
  png_read_image(r.png, rows.data());
  png_read_end(r.png, nullptr);
  return image;
}

BinaryMask load_mask(const std::filesystem::path& path) {
  PngReader r;
  open_png(r, path);
  if (setjmp(png_jmpbuf(r.png))) {
    raise(ErrorCode::DecodeError, "corrupt PNG: " + path.string());
  }

  const int bit_depth = png_get_bit_depth(r.png, r.info);
  const int color_type = png_get_color_type(r.png, r.info);
  if (color_type != PNG_COLOR_TYPE_GRAY) {
    raise(ErrorCode::DecodeError, "mask must be single-channel: " + path.string());
  }
  if (bit_depth == 16) {
    raise(ErrorCode::DecodeError, "16-bit PNG not supported: " + path.string());
  }
  if (bit_depth < 8) png_set_expand_gray_1_2_4_to_8(r.png);
  png_read_update_info(r.png, r.info);

  const int width = static_cast<int>(png_get_image_width(r.png, r.info));
  const int height = static_cast<int>(png_get_image_height(r.png, r.info));

  std::vector<std::uint8_t> raw(static_cast<std::size_t>(width) * height);
  std::vector<png_bytep> rows(height);
  for (int y = 0; y < height; ++y) {
    rows[y] = raw.data() + static_cast<std::size_t>(y) * width;
  }
  png_read_image(r.png, rows.data());
  png_read_end(r.png, nullptr);

  BinaryMask mask(width, height);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == 255) {
      mask.bits[i] = 1;
    } else if (raw[i] == 0) {
      mask.bits[i] = 0;
    } else {
      raise(ErrorCode::NonBinaryValues,
            "mask pixel value " + std::to_string(raw[i]) + " in " + path.string());
    }
  }
  return mask;
}

std::vector<std::uint8_t> encode_image_png(const ImageBuffer& image) {
  return encode_png(image.data.data(), image.width, image.height, PNG_COLOR_TYPE_RGB);
}

std::vector<std::uint8_t> encode_mask_png(const BinaryMask& mask) {
  std::vector<std::uint8_t> gray(mask.bits.size());
  for (std::size_t i = 0; i < gray.size(); ++i) gray[i] = mask.bits[i] ? 255 : 0;
  return encode_png(gray.data(), mask.width, mask.height, PNG_COLOR_TYPE_GRAY);
}

void save_image(const ImageBuffer& image, const std::filesystem::path& path) {
  const auto bytes = encode_image_png(image);
  write_file_atomic(path, bytes.data(), bytes.size());
}

void save_mask(const BinaryMask& mask, const std::filesystem::path& path) {
  const auto bytes = encode_mask_png(mask);
  write_file_atomic(path, bytes.data(), bytes.size());
}

}  // namespace amrf
