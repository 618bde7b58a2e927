#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "tangles/surface.hpp"

namespace {

struct Row {
  double x, y, z, t2, margin;
};

void parse_csv(const std::string& text, std::vector<Row>* rows, std::string* header = nullptr) {
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first) {
      if (header) *header = line;
      first = false;
      continue;
    }
    Row r{};
    ASSERT_EQ(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &r.x, &r.y, &r.z, &r.t2, &r.margin),
              5)
        << line;
    rows->push_back(r);
  }
}

std::vector<Row> emit(tangles::SurfaceField field, const tangles::GridSpec& grid,
                      std::string* header = nullptr) {
  std::ostringstream os;
  tangles::write_surface_csv(os, field, grid);
  std::vector<Row> rows;
  parse_csv(os.str(), &rows, header);
  return rows;
}

TEST(Surface, SchemaAndRowCount) {
  tangles::GridSpec grid;
  grid.points = 5;
  grid.t2_slices = {0.25, 0.0};
  std::string header;
  const std::vector<Row> rows = emit(tangles::SurfaceField::achievability, grid, &header);
  EXPECT_EQ(header, "x,y,z,t2,margin");
  EXPECT_EQ(rows.size(), 2u * 5u * 5u * 5u);
  EXPECT_DOUBLE_EQ(rows.front().t2, 0.25);
  EXPECT_DOUBLE_EQ(rows.back().t2, 0.0);
  EXPECT_DOUBLE_EQ(rows.front().x, 0.0);
  EXPECT_DOUBLE_EQ(rows.back().x, 1.0);
}

TEST(Surface, NonSlicedFieldsCollapseToOneSlice) {
  tangles::GridSpec grid;
  grid.points = 4;
  grid.t2_slices = {0.9, 0.5};  // ignored for the pair-only fields
  const std::vector<Row> rows = emit(tangles::SurfaceField::steiner_convex, grid);
  EXPECT_EQ(rows.size(), 4u * 4u * 4u);
  for (const Row& r : rows) EXPECT_DOUBLE_EQ(r.t2, 0.0);
}

TEST(Surface, KnownBoundaryValuesAppearInRows) {
  tangles::GridSpec grid;  // 31 points puts 2/3 and 1 exactly on the grid
  const std::vector<Row> convex = emit(tangles::SurfaceField::steiner_convex, grid);
  bool found_balanced = false;
  for (const Row& r : convex)
    if (std::abs(r.x - 2.0 / 3.0) < 1e-12 && std::abs(r.y - 2.0 / 3.0) < 1e-12 &&
        std::abs(r.z - 2.0 / 3.0) < 1e-12) {
      found_balanced = true;
      EXPECT_NEAR(r.margin, 0.0, 1e-9);
    }
  EXPECT_TRUE(found_balanced);

  const std::vector<Row> null_rows = emit(tangles::SurfaceField::steiner_null, grid);
  bool found_corner = false;
  for (const Row& r : null_rows)
    if (r.x == 1.0 && r.y == 1.0 && r.z == 1.0) {
      found_corner = true;
      EXPECT_NEAR(r.margin, 0.0, 1e-9);
    }
  EXPECT_TRUE(found_corner);
}

TEST(Surface, AchievabilitySliceHasFeasibleRegion) {
  tangles::GridSpec grid;
  grid.t2_slices = {0.98, 0.64, 0.09, 0.0, -0.01, -0.25};
  const std::vector<Row> rows = emit(tangles::SurfaceField::achievability, grid);
  for (double slice : grid.t2_slices) {
    bool feasible = false;
    for (const Row& r : rows)
      if (r.t2 == slice && r.margin >= -1e-9) {
        feasible = true;
        break;
      }
    EXPECT_TRUE(feasible) << slice;
  }
}

TEST(Surface, TriangleFieldIsFiniteEverywhere) {
  tangles::GridSpec grid;
  grid.points = 9;
  const std::vector<Row> rows = emit(tangles::SurfaceField::triangle, grid);
  for (const Row& r : rows) EXPECT_TRUE(std::isfinite(r.margin));
}

TEST(Surface, FieldNamesRoundTrip) {
  EXPECT_EQ(tangles::field_from_name("achievability"), tangles::SurfaceField::achievability);
  EXPECT_EQ(tangles::field_from_name("steiner-convex"), tangles::SurfaceField::steiner_convex);
  EXPECT_EQ(tangles::field_from_name("steiner-concave"), tangles::SurfaceField::steiner_concave);
  EXPECT_EQ(tangles::field_from_name("steiner-null"), tangles::SurfaceField::steiner_null);
  EXPECT_EQ(tangles::field_from_name("triangle"), tangles::SurfaceField::triangle);
  EXPECT_THROW(tangles::field_from_name("no-such-field"), std::invalid_argument);
}

TEST(Surface, GridValidation) {
  tangles::GridSpec bad;
  bad.points = 1;
  EXPECT_THROW(tangles::check_grid(bad), std::invalid_argument);
  tangles::GridSpec inverted;
  inverted.lo = 0.5;
  inverted.hi = 0.2;
  EXPECT_THROW(tangles::check_grid(inverted), std::invalid_argument);
  tangles::GridSpec wide;
  wide.hi = 2.0;
  EXPECT_THROW(tangles::check_grid(wide), std::domain_error);
  tangles::GridSpec slice;
  slice.t2_slices = {1.5};
  EXPECT_THROW(tangles::check_grid(slice), std::domain_error);
}

}  // namespace
