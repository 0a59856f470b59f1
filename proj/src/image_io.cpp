#include "tvdd/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "tvdd/errors.hpp"

namespace tvdd {

namespace {

enum class ImageFormat { pgm, png };

ImageFormat format_from_path(const std::string& path) {
  const auto dot = path.find_last_of('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (ext == "pgm" || ext == "pnm") return ImageFormat::pgm;
  if (ext == "png") return ImageFormat::png;
  throw UnsupportedFormat("unsupported image extension in '" + path + "' (use .pgm or .png)");
}

unsigned char quantize8(double v) {
  return static_cast<unsigned char>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

// ---- PGM -------------------------------------------------------------

GridFunction load_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5'))
    throw UnsupportedFormat("'" + path + "' is not a PGM image");
  const bool binary = bytes[1] == '5';

  std::size_t pos = 2;
  auto next_int = [&]() -> long {
    for (;;) {
      while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
      if (pos < bytes.size() && bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        continue;
      }
      break;
    }
    if (pos >= bytes.size() || !std::isdigit(static_cast<unsigned char>(bytes[pos])))
      throw UnsupportedFormat("malformed PGM data in '" + path + "'");
    long v = 0;
    while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
      v = v * 10 + (bytes[pos] - '0');
      ++pos;
    }
    return v;
  };

  const long width = next_int();
  const long height = next_int();
  const long maxval = next_int();
  if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 65535)
    throw UnsupportedFormat("malformed PGM data in '" + path + "'");

  GridFunction u(GridDomain::from_sizes({height, width}), 1);
  const std::size_t n = u.domain().num_points();
  if (binary) {
    ++pos;  // single whitespace byte terminates the header
    const std::size_t bpp = maxval < 256 ? 1 : 2;
    if (bytes.size() < pos + n * bpp) throw IoError("truncated PGM pixel data in '" + path + "'");
    for (std::size_t i = 0; i < n; ++i) {
      const auto hi = static_cast<unsigned char>(bytes[pos + i * bpp]);
      const long raw =
          bpp == 1 ? hi : (static_cast<long>(hi) << 8) | static_cast<unsigned char>(bytes[pos + i * bpp + 1]);
      u.at(i, 0) = static_cast<double>(raw) / static_cast<double>(maxval);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i)
      u.at(i, 0) = static_cast<double>(next_int()) / static_cast<double>(maxval);
  }
  return u;
}

void save_pgm(const GridFunction& u, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  const long h = u.domain().extent(0);
  const long w = u.domain().extent(1);
  out << "P5\n" << w << " " << h << "\n255\n";
  std::vector<char> row(static_cast<std::size_t>(w));
  for (long r = 0; r < h; ++r) {
    for (long c = 0; c < w; ++c)
      row[static_cast<std::size_t>(c)] =
          static_cast<char>(quantize8(u.at(static_cast<std::size_t>(r * w + c), 0)));
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
  if (!out) throw IoError("failed writing '" + path + "'");
}

// ---- PNG -------------------------------------------------------------

struct PngReadGuard {
  png_structp png = nullptr;
  png_infop info = nullptr;
  std::FILE* fp = nullptr;
  ~PngReadGuard() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    if (fp) std::fclose(fp);
  }
};

struct PngWriteGuard {
  png_structp png = nullptr;
  png_infop info = nullptr;
  std::FILE* fp = nullptr;
  ~PngWriteGuard() {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    if (fp) std::fclose(fp);
  }
};

GridFunction load_png(const std::string& path) {
  PngReadGuard ctx;
  ctx.fp = std::fopen(path.c_str(), "rb");
  if (!ctx.fp) throw IoError("cannot open '" + path + "' for reading");

  unsigned char sig[8];
  if (std::fread(sig, 1, 8, ctx.fp) != 8 || png_sig_cmp(sig, 0, 8))
    throw UnsupportedFormat("'" + path + "' is not a PNG image");

  ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (ctx.png) ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.png || !ctx.info) throw IoError("PNG reader initialization failed");

  // libpng reports decode errors through longjmp; translate to an exception.
  if (setjmp(png_jmpbuf(ctx.png))) throw IoError("failed decoding '" + path + "'");

  png_init_io(ctx.png, ctx.fp);
  png_set_sig_bytes(ctx.png, 8);
  png_read_info(ctx.png, ctx.info);

  const png_uint_32 w = png_get_image_width(ctx.png, ctx.info);
  const png_uint_32 h = png_get_image_height(ctx.png, ctx.info);
  if (png_get_color_type(ctx.png, ctx.info) != PNG_COLOR_TYPE_GRAY)
    throw UnsupportedFormat("'" + path + "' is not a greyscale PNG");
  if (png_get_bit_depth(ctx.png, ctx.info) < 8) png_set_expand_gray_1_2_4_to_8(ctx.png);
  png_set_interlace_handling(ctx.png);
  png_read_update_info(ctx.png, ctx.info);

  const int depth = png_get_bit_depth(ctx.png, ctx.info);
  const std::size_t rowbytes = png_get_rowbytes(ctx.png, ctx.info);
  std::vector<unsigned char> buf(rowbytes * h);
  std::vector<png_bytep> rows(h);
  for (png_uint_32 r = 0; r < h; ++r) rows[r] = buf.data() + r * rowbytes;
  png_read_image(ctx.png, rows.data());
  png_read_end(ctx.png, nullptr);

  GridFunction u(GridDomain::from_sizes({static_cast<long>(h), static_cast<long>(w)}), 1);
  const double maxv = depth == 16 ? 65535.0 : 255.0;
  std::size_t i = 0;
  for (png_uint_32 r = 0; r < h; ++r) {
    const unsigned char* src = rows[r];
    for (png_uint_32 c = 0; c < w; ++c, ++i) {
      const long raw = depth == 16 ? (static_cast<long>(src[2 * c]) << 8) | src[2 * c + 1] : src[c];
      u.at(i, 0) = static_cast<double>(raw) / maxv;
    }
  }
  return u;
}

void save_png(const std::vector<unsigned char>& pixels, long width, long height, int color_type,
              const std::string& path) {
  PngWriteGuard ctx;
  ctx.fp = std::fopen(path.c_str(), "wb");
  if (!ctx.fp) throw IoError("cannot open '" + path + "' for writing");

  ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (ctx.png) ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.png || !ctx.info) throw IoError("PNG writer initialization failed");

  if (setjmp(png_jmpbuf(ctx.png))) throw IoError("failed writing '" + path + "'");

  png_init_io(ctx.png, ctx.fp);
  png_set_IHDR(ctx.png, ctx.info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
               color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(ctx.png, ctx.info);

  const std::size_t rowbytes = static_cast<std::size_t>(width) * (color_type == PNG_COLOR_TYPE_RGB ? 3 : 1);
  std::vector<png_bytep> rows(static_cast<std::size_t>(height));
  for (long r = 0; r < height; ++r)
    rows[static_cast<std::size_t>(r)] =
        const_cast<png_bytep>(pixels.data()) + static_cast<std::size_t>(r) * rowbytes;
  png_write_image(ctx.png, rows.data());
  png_write_end(ctx.png, nullptr);
  if (std::fflush(ctx.fp) != 0) throw IoError("failed writing '" + path + "'");
}

void require_image_shape(const GridFunction& u, int channels, const char* what) {
  if (u.domain().dim() != 2 || u.channels() != channels)
    throw ShapeMismatch(std::string(what) + " requires a 2-D field with " + std::to_string(channels) +
                        " channel(s)");
}

}  // namespace

GridFunction load_image(const std::string& path) {
  return format_from_path(path) == ImageFormat::pgm ? load_pgm(path) : load_png(path);
}

void save_image(const GridFunction& u, const std::string& path) {
  require_image_shape(u, 1, "save_image");
  if (format_from_path(path) == ImageFormat::pgm) {
    save_pgm(u, path);
    return;
  }
  const long h = u.domain().extent(0);
  const long w = u.domain().extent(1);
  std::vector<unsigned char> pixels(u.domain().num_points());
  for (std::size_t i = 0; i < pixels.size(); ++i) pixels[i] = quantize8(u.at(i, 0));
  save_png(pixels, w, h, PNG_COLOR_TYPE_GRAY, path);
}

void save_color_image(const GridFunction& rgb, const std::string& path) {
  require_image_shape(rgb, 3, "save_color_image");
  if (format_from_path(path) != ImageFormat::png)
    throw UnsupportedFormat("color output requires a .png path, got '" + path + "'");
  const long h = rgb.domain().extent(0);
  const long w = rgb.domain().extent(1);
  std::vector<unsigned char> pixels(rgb.domain().num_points() * 3);
  for (std::size_t i = 0; i < rgb.domain().num_points(); ++i)
    for (int c = 0; c < 3; ++c) pixels[3 * i + static_cast<std::size_t>(c)] = quantize8(rgb.at(i, c));
  save_png(pixels, w, h, PNG_COLOR_TYPE_RGB, path);
}

void write_energy_csv(const std::vector<double>& values, double k_scale, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.precision(17);
  out << "k,energy\n";
  for (std::size_t i = 0; i < values.size(); ++i)
    out << static_cast<double>(i) * k_scale << ',' << values[i] << '\n';
  if (!out) throw IoError("failed writing '" + path + "'");
}

void write_comparison_csv(const std::vector<double>& glob, std::size_t glob_stride,
                          const std::vector<double>& seq, const std::vector<double>& par,
                          const std::string& path) {
  if (glob.empty() || seq.empty() || par.empty() || glob_stride == 0)
    throw std::invalid_argument("write_comparison_csv needs non-empty traces and a positive stride");
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.precision(17);
  out << "k,glob_energy,ddseq_energy,ddpar_energy\n";
  const std::size_t rows = std::min(seq.size(), par.size());
  for (std::size_t k = 0; k < rows; ++k) {
    const std::size_t gi = std::min(k * glob_stride, glob.size() - 1);
    out << k << ',' << glob[gi] << ',' << seq[k] << ',' << par[k] << '\n';
  }
  if (!out) throw IoError("failed writing '" + path + "'");
}

void write_flow_csv(const GridFunction& flow, const std::string& path) {
  require_image_shape(flow, 2, "write_flow_csv");
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.precision(17);
  out << "x1,x2,u1,u2\n";
  for_each_point(flow.domain(), whole_box(flow.domain()), [&](std::size_t i, const std::vector<long>& x) {
    out << x[0] << ',' << x[1] << ',' << flow.at(i, 0) << ',' << flow.at(i, 1) << '\n';
  });
  if (!out) throw IoError("failed writing '" + path + "'");
}

}  // namespace tvdd
