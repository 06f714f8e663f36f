#include "steplab/heightfield.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <vector>
#include <ostream>
#include <stdexcept>

#include "steplab/rng.hpp"

namespace steplab {

HeightField::HeightField(int nx, int ny, double cell_size, Vec2 origin)
    : nx_(nx), ny_(ny), cell_size_(cell_size), origin_(origin),
      data_(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny), 0.0) {
  if (nx < 2 || ny < 2 || cell_size <= 0.0) throw std::invalid_argument("bad height field dims");
}

double HeightField::at(int ix, int iy) const {
  return data_[static_cast<std::size_t>(iy) * static_cast<std::size_t>(nx_) +
               static_cast<std::size_t>(ix)];
}

void HeightField::set(int ix, int iy, double z) {
  data_[static_cast<std::size_t>(iy) * static_cast<std::size_t>(nx_) +
        static_cast<std::size_t>(ix)] = z;
}

double HeightField::sample(double x, double y) const {
  const double gx = std::clamp((x - origin_.x()) / cell_size_, 0.0, static_cast<double>(nx_ - 1));
  const double gy = std::clamp((y - origin_.y()) / cell_size_, 0.0, static_cast<double>(ny_ - 1));
  const int ix = std::min(static_cast<int>(gx), nx_ - 2);
  const int iy = std::min(static_cast<int>(gy), ny_ - 2);
  const double fx = gx - ix, fy = gy - iy;
  const double z00 = at(ix, iy), z10 = at(ix + 1, iy);
  const double z01 = at(ix, iy + 1), z11 = at(ix + 1, iy + 1);
  return (1 - fx) * (1 - fy) * z00 + fx * (1 - fy) * z10 + (1 - fx) * fy * z01 + fx * fy * z11;
}

Vec2 HeightField::gradient(double x, double y) const {
  const double gx = std::clamp((x - origin_.x()) / cell_size_, 0.0, static_cast<double>(nx_ - 1));
  const double gy = std::clamp((y - origin_.y()) / cell_size_, 0.0, static_cast<double>(ny_ - 1));
  const int ix = std::min(static_cast<int>(gx), nx_ - 2);
  const int iy = std::min(static_cast<int>(gy), ny_ - 2);
  const double fx = gx - ix, fy = gy - iy;
  const double z00 = at(ix, iy), z10 = at(ix + 1, iy);
  const double z01 = at(ix, iy + 1), z11 = at(ix + 1, iy + 1);
  const double dzdx = ((z10 - z00) * (1 - fy) + (z11 - z01) * fy) / cell_size_;
  const double dzdy = ((z01 - z00) * (1 - fx) + (z11 - z10) * fx) / cell_size_;
  return {dzdx, dzdy};
}

void HeightField::save_binary(std::ostream& os) const {
  const char magic[4] = {'S', 'L', 'H', 'F'};
  os.write(magic, 4);
  const std::int32_t dims[2] = {nx_, ny_};
  os.write(reinterpret_cast<const char*>(dims), sizeof(dims));
  const double geo[3] = {cell_size_, origin_.x(), origin_.y()};
  os.write(reinterpret_cast<const char*>(geo), sizeof(geo));
  std::vector<float> payload(data_.begin(), data_.end());
  os.write(reinterpret_cast<const char*>(payload.data()),
           static_cast<std::streamsize>(payload.size() * sizeof(float)));
}

HeightField HeightField::load_binary(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || magic[0] != 'S' || magic[1] != 'L' || magic[2] != 'H' || magic[3] != 'F') {
    throw std::runtime_error("not a height field file");
  }
  std::int32_t dims[2];
  is.read(reinterpret_cast<char*>(dims), sizeof(dims));
  double geo[3];
  is.read(reinterpret_cast<char*>(geo), sizeof(geo));
  HeightField f(dims[0], dims[1], geo[0], {geo[1], geo[2]});
  std::vector<float> payload(f.data_.size());
  is.read(reinterpret_cast<char*>(payload.data()),
          static_cast<std::streamsize>(payload.size() * sizeof(float)));
  if (!is) throw std::runtime_error("truncated height field file");
  std::copy(payload.begin(), payload.end(), f.data_.begin());
  return f;
}

void HeightField::save_ascii(std::ostream& os) const {
  os << nx_ << ' ' << ny_ << ' ' << cell_size_ << ' ' << origin_.x() << ' ' << origin_.y() << '\n';
  for (int iy = 0; iy < ny_; ++iy) {
    for (int ix = 0; ix < nx_; ++ix) {
      os << at(ix, iy) << (ix + 1 == nx_ ? '\n' : ' ');
    }
  }
}

std::uint64_t HeightField::content_hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const unsigned char* p, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 1099511628211ULL;
    }
  };
  const std::int32_t dims[2] = {nx_, ny_};
  mix(reinterpret_cast<const unsigned char*>(dims), sizeof(dims));
  std::vector<float> payload(data_.begin(), data_.end());
  mix(reinterpret_cast<const unsigned char*>(payload.data()), payload.size() * sizeof(float));
  return h;
}

namespace {

struct Perlin {
  std::array<int, 512> perm;

  explicit Perlin(std::uint64_t seed) {
    std::array<int, 256> base;
    std::iota(base.begin(), base.end(), 0);
    Rng rng = make_rng(seed, "perlin");
    std::shuffle(base.begin(), base.end(), rng);
    for (int i = 0; i < 512; ++i) perm[static_cast<std::size_t>(i)] = base[static_cast<std::size_t>(i & 255)];
  }

  static double fade(double t) { return t * t * t * (t * (t * 6 - 15) + 10); }

  static double grad(int hash, double x, double y) {
    // 8 unit-length gradient directions
    static const double gx[8] = {1, -1, 0, 0, M_SQRT1_2, -M_SQRT1_2, M_SQRT1_2, -M_SQRT1_2};
    static const double gy[8] = {0, 0, 1, -1, M_SQRT1_2, M_SQRT1_2, -M_SQRT1_2, -M_SQRT1_2};
    const int h = hash & 7;
    return gx[h] * x + gy[h] * y;
  }

  double noise(double x, double y) const {
    const int xi = static_cast<int>(std::floor(x)) & 255;
    const int yi = static_cast<int>(std::floor(y)) & 255;
    const double xf = x - std::floor(x);
    const double yf = y - std::floor(y);
    const double u = fade(xf), v = fade(yf);
    const int aa = perm[static_cast<std::size_t>(perm[static_cast<std::size_t>(xi)] + yi)];
    const int ab = perm[static_cast<std::size_t>(perm[static_cast<std::size_t>(xi)] + yi + 1)];
    const int ba = perm[static_cast<std::size_t>(perm[static_cast<std::size_t>(xi + 1)] + yi)];
    const int bb = perm[static_cast<std::size_t>(perm[static_cast<std::size_t>(xi + 1)] + yi + 1)];
    const double x1 = std::lerp(grad(aa, xf, yf), grad(ba, xf - 1, yf), u);
    const double x2 = std::lerp(grad(ab, xf, yf - 1), grad(bb, xf - 1, yf - 1), u);
    return std::lerp(x1, x2, v);  // in [-sqrt(2)/2, sqrt(2)/2]
  }
};

}  // namespace

HeightField perlin_heightfield(std::uint64_t seed, int nx, int ny, double cell_size,
                               double amplitude, double frequency, int octaves) {
  if (octaves < 1) throw std::invalid_argument("octaves must be >= 1");
  HeightField field(nx, ny, cell_size);
  if (amplitude == 0.0) return field;
  const Perlin perlin(seed);
  double gain_sum = 0.0;
  {
    double g = 1.0;
    for (int o = 0; o < octaves; ++o, g *= 0.5) gain_sum += g;
  }
  const double norm = amplitude / (gain_sum * M_SQRT1_2);
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const double x = ix * cell_size, y = iy * cell_size;
      double value = 0.0, gain = 1.0, freq = frequency;
      for (int o = 0; o < octaves; ++o) {
        value += gain * perlin.noise(x * freq + 31.4159, y * freq + 27.1828);
        gain *= 0.5;
        freq *= 2.0;
      }
      field.set(ix, iy, norm * value);
    }
  }
  return field;
}

StepSequence project_footsteps(const HeightField& field, const FootstepPlan& plan) {
  StepSequence seq;
  seq.horizon = plan.n_steps + 2;
  const double half = 0.5 * plan.foot_spacing;
  const Vec2 lateral = rotate_2d(plan.start_heading + kPi / 2.0, {1.0, 0.0});

  auto start_foot = [&](double side) {
    Step s;
    const Vec2 xy = plan.start + side * half * lateral;
    s.center = {xy.x(), xy.y(), field.sample(xy.x(), xy.y()) + plan.start_offset_z};
    s.heading = plan.start_heading;
    s.radius = plan.step_radius;
    return s;
  };
  seq.steps.push_back(start_foot(+1.0));
  seq.steps.push_back(start_foot(-1.0));

  Vec2 pos = plan.start;
  for (int i = 0; i < plan.n_steps; ++i) {
    const double heading = plan.start_heading + static_cast<double>(i) * plan.turn_per_step;
    pos += plan.step_length * Vec2(std::cos(heading), std::sin(heading));
    Step s;
    s.heading = wrap_angle(heading);
    s.radius = plan.step_radius;
    const double z = field.sample(pos.x(), pos.y());
    s.center = {pos.x(), pos.y(), z};
    const Vec2 g = field.gradient(pos.x(), pos.y());
    const Vec2 g_local = rotate_2d(-heading, g);
    s.surface_pitch = std::atan(g_local.x());  // ascend along the heading
    s.surface_roll = std::atan(g_local.y());   // ascend to the local left
    seq.steps.push_back(s);
  }
  seq.target_index = 2;
  return seq;
}

}  // namespace steplab
