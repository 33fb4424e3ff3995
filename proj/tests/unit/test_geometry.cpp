#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "tpmg/geometry.hpp"

using namespace tpmg;

namespace {

double length(const Vec3& v) { return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z); }

double area_ratio(int nx) {
  const PanelGrid g(nx, 1, 0.01);
  double lo = 1e300, hi = 0;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < nx; ++j) {
      lo = std::min(lo, g.column_area(i, j));
      hi = std::max(hi, g.column_area(i, j));
    }
  return hi / lo;
}

}  // namespace

TEST(MapToSphere, Examples) {
  const double h = std::sqrt(2.0) / 2.0;
  auto expect = [](Vec3 v, double x, double y, double z) {
    EXPECT_NEAR(v.x, x, 1e-15);
    EXPECT_NEAR(v.y, y, 1e-15);
    EXPECT_NEAR(v.z, z, 1e-15);
  };
  expect(map_to_sphere(0, 0, 1), 0, 0, 1);
  expect(map_to_sphere(1, 0, 1), h, 0, h);
  expect(map_to_sphere(0, 1, 1), 0, h, h);
}

TEST(MapToSphere, PreservesRadius) {
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> xi(-1, 1), r(0.5, 2.0);
  for (int n = 0; n < 1000; ++n) {
    const double rr = r(gen);
    EXPECT_NEAR(length(map_to_sphere(xi(gen), xi(gen), rr)) / rr, 1.0, 1e-14);
  }
}

TEST(MapToSphere, GnomonicRay) {
  // The image lies on the ray through (xi1, xi2, 1).
  const Vec3 v = map_to_sphere(0.3, -0.7, 1.0);
  EXPECT_NEAR(v.x / v.z, 0.3, 1e-14);
  EXPECT_NEAR(v.y / v.z, -0.7, 1e-14);
}

TEST(MapToSphere, RejectsOutOfRange) {
  EXPECT_THROW(map_to_sphere(1.5, 0, 1), std::out_of_range);
  EXPECT_THROW(map_to_sphere(0, -1.01, 1), std::out_of_range);
  EXPECT_THROW(map_to_sphere(0, 0, 0), std::out_of_range);
  EXPECT_THROW(map_to_sphere(NAN, 0, 1), std::out_of_range);
}

TEST(VerticalLevels, Examples) {
  const auto r = vertical_levels(128, 0.01);
  EXPECT_DOUBLE_EQ(r[128], 1.01);
  EXPECT_DOUBLE_EQ(r[64], 1.0025);
  EXPECT_DOUBLE_EQ(r[0], 1.0);
  const auto s = vertical_levels(2, 0.01);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_DOUBLE_EQ(s[1], 1.0025);
  EXPECT_THROW(vertical_levels(0, 0.01), std::invalid_argument);
  EXPECT_THROW(vertical_levels(4, 0.0), std::invalid_argument);
}

TEST(VerticalLevels, SpacingIncreases) {
  const auto r = vertical_levels(128, 0.01);
  for (int k = 1; k < 128; ++k) EXPECT_GT(r[k + 1] - r[k], r[k] - r[k - 1]);
}

TEST(PanelGrid, FlatUnitCell) {
  const PanelGrid g(2, 1, 1.0, true);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) EXPECT_DOUBLE_EQ(g.cell_geometry(i, j, 0).volume, 1.0);
  EXPECT_DOUBLE_EQ(g.total_volume(), 4.0);
}

TEST(PanelGrid, VolumeIsSixthOfShell) {
  const double H = 0.01;
  const PanelGrid g(64, 16, H);
  const double shell = 4.0 * std::numbers::pi / 3.0 * (std::pow(1 + H, 3) - 1.0) / 6.0;
  EXPECT_NEAR(g.total_volume() / shell, 1.0, 5e-3);
  double sum = 0.0;
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 64; ++j)
      for (int k = 0; k < 16; ++k) sum += g.cell_geometry(i, j, k).volume;
  EXPECT_NEAR(sum / shell, 1.0, 5e-3);
}

TEST(PanelGrid, SolidAnglesSumToSixthOfSphere) {
  const PanelGrid g(32, 1, 0.01);
  double sum = 0.0;
  for (int i = 0; i < 32; ++i)
    for (int j = 0; j < 32; ++j) sum += g.column_area(i, j);
  EXPECT_NEAR(sum, 4.0 * std::numbers::pi / 6.0, 1e-12);
}

TEST(PanelGrid, CenterCellsAreLargest) {
  const PanelGrid g(16, 1, 0.01);
  const double center = g.column_area(7, 7);
  EXPECT_DOUBLE_EQ(center, g.column_area(8, 8));
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) EXPECT_LE(g.column_area(i, j), center * (1 + 1e-14));
  EXPECT_LT(g.column_area(0, 0), center);
}

TEST(PanelGrid, AreaRatioBoundedAndConverges) {
  const double r256 = area_ratio(256), r512 = area_ratio(512);
  EXPECT_LT(r512, 6.0);
  EXPECT_NEAR(r256 / r512, 1.0, 0.01);
}

TEST(PanelGrid, FaceFactorsSymmetric) {
  const PanelGrid g(8, 4, 0.01);
  for (int i = 0; i + 1 < 8; ++i)
    for (int j = 0; j < 8; ++j)
      for (int k = 0; k < 4; ++k) {
        const auto a = g.cell_geometry(i, j, k), b = g.cell_geometry(i + 1, j, k);
        EXPECT_EQ(a.face_area_xi1[1], b.face_area_xi1[0]);
        EXPECT_EQ(a.center_dist_xi1[1], b.center_dist_xi1[0]);
        const auto c = g.cell_geometry(j, i, k), d = g.cell_geometry(j, i + 1, k);
        EXPECT_EQ(c.face_area_xi2[1], d.face_area_xi2[0]);
        EXPECT_EQ(c.center_dist_xi2[1], d.center_dist_xi2[0]);
      }
  for (int k = 0; k + 1 < 4; ++k) {
    const auto a = g.cell_geometry(3, 5, k), b = g.cell_geometry(3, 5, k + 1);
    EXPECT_EQ(a.face_area_r[1], b.face_area_r[0]);
    EXPECT_EQ(a.center_dist_r[1], b.center_dist_r[0]);
  }
}

TEST(PanelGrid, MirrorSymmetry) {
  const PanelGrid g(8, 2, 0.01);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      EXPECT_NEAR(g.column_area(i, j), g.column_area(7 - i, j), 1e-15);
      EXPECT_NEAR(g.column_area(i, j), g.column_area(j, i), 1e-15);
    }
}

TEST(PanelGrid, CachedFactorsMatchRecomputation) {
  for (bool flat : {false, true}) {
    const PanelGrid g(8, 4, 0.01, flat);
    const auto mass = g.mass_profile(), hflux = g.hflux_profile(), vflux = g.vflux_profile();
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j)
        for (int k = 0; k < 4; ++k) {
          const auto c = g.cell_geometry(i, j, k);
          EXPECT_NEAR(g.column_area(i, j) * mass[k] / c.volume, 1.0, 1e-12);
          if (i > 0)
            EXPECT_NEAR(g.face_factor_xi1(i, j) * hflux[k] / (c.face_area_xi1[0] / c.center_dist_xi1[0]), 1.0, 1e-12);
          if (j > 0)
            EXPECT_NEAR(g.face_factor_xi2(i, j) * hflux[k] / (c.face_area_xi2[0] / c.center_dist_xi2[0]), 1.0, 1e-12);
          if (k > 0)
            EXPECT_NEAR(g.column_area(i, j) * vflux[k - 1] / (c.face_area_r[0] / c.center_dist_r[0]), 1.0, 1e-12);
        }
    for (int j = 0; j < 8; ++j) {
      EXPECT_EQ(g.face_factor_xi1(0, j), 0.0);
      EXPECT_EQ(g.face_factor_xi1(8, j), 0.0);
      EXPECT_EQ(g.face_factor_xi2(j, 0), 0.0);
      EXPECT_EQ(g.face_factor_xi2(j, 8), 0.0);
    }
  }
}

TEST(PanelGrid, BoundaryFlags) {
  const PanelGrid g(4, 3, 0.01);
  const auto c = g.cell_geometry(0, 3, 2);
  EXPECT_TRUE(c.boundary_xi1[0]);
  EXPECT_FALSE(c.boundary_xi1[1]);
  EXPECT_FALSE(c.boundary_xi2[0]);
  EXPECT_TRUE(c.boundary_xi2[1]);
  EXPECT_FALSE(c.boundary_r[0]);
  EXPECT_TRUE(c.boundary_r[1]);
  EXPECT_THROW(g.cell_geometry(4, 0, 0), std::out_of_range);
}

TEST(PanelGrid, CoarseningConservesArea) {
  const PanelGrid g(16, 4, 0.01);
  const PanelGrid c = g.coarsened();
  EXPECT_EQ(c.nx(), 8);
  EXPECT_EQ(c.levels(), g.levels());
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      const double children = g.column_area(2 * i, 2 * j) + g.column_area(2 * i + 1, 2 * j) +
                              g.column_area(2 * i, 2 * j + 1) + g.column_area(2 * i + 1, 2 * j + 1);
      EXPECT_NEAR(children / c.column_area(i, j), 1.0, 1e-13);
    }
  EXPECT_THROW(PanelGrid(1, 4, 0.01).coarsened(), std::logic_error);
}

TEST(PanelGrid, RejectsBadLevels) {
  EXPECT_THROW(PanelGrid(4, std::vector<double>{1.0, 1.0, 2.0}, false), std::invalid_argument);
  EXPECT_THROW(PanelGrid(4, std::vector<double>{1.0}, false), std::invalid_argument);
  EXPECT_THROW(PanelGrid(0, 4, 0.01), std::invalid_argument);
}
