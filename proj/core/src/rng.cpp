#include "hss/rng.hpp"

#include <boost/math/distributions/normal.hpp>

namespace hss {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t substream_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags) {
  std::uint64_t h = mix64(base);
  for (std::uint64_t t : tags) h = mix64(h ^ mix64(t + 0x632be59bd9b4e019ULL));
  return h;
}

double standard_normal(Rng& rng) {
  static const boost::math::normal_distribution<double> unit{};
  return boost::math::quantile(unit, uniform_open01(rng));
}

}  // namespace hss
