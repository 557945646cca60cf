#pragma once

#include <array>
#include <vector>

namespace levyq::cli {

// Printed reference values at x = 0, t = 1 (five decimals; n = 1 in Table 1 has four).
struct PrintedTable {
  std::vector<int> phase_counts;
  std::array<double, 10> alphas;
  // cells[row][col] follows alphas x phase_counts.
  std::vector<std::vector<double>> cells;
  // Table 1 only.
  std::vector<double> exact;
  std::vector<double> relative_error_pct;
};

inline const PrintedTable& table1() {
  static const PrintedTable t{
      {1, 4, 6, 7, 8},
      {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0},
      {
          {0.9647, 0.96064, 0.96021, 0.96005, 0.96001},
          {0.9318, 0.92410, 0.92327, 0.92299, 0.92300},
          {0.9011, 0.89008, 0.88892, 0.88851, 0.88836},
          {0.8723, 0.85836, 0.85688, 0.85638, 0.85608},
          {0.8453, 0.82870, 0.82696, 0.82637, 0.82590},
          {0.8199, 0.80094, 0.79896, 0.79828, 0.79786},
          {0.7960, 0.77488, 0.77270, 0.77196, 0.77237},
          {0.7735, 0.75040, 0.74803, 0.74723, 0.74625},
          {0.7522, 0.72735, 0.72482, 0.72397, 0.72415},
          {0.7321, 0.70562, 0.70295, 0.70205, 0.70205},
      },
      {0.95914, 0.92128, 0.88611, 0.85338, 0.82285, 0.79432, 0.76760, 0.74254, 0.71900, 0.69684},
      {-0.09, -0.19, -0.25, -0.32, -0.37, -0.44, -0.62, -0.50, -0.71, -0.74},
  };
  return t;
}

inline const PrintedTable& table2() {
  static const PrintedTable t{
      {1, 4, 5, 6, 7, 8},
      {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0},
      {
          {0.97582, 0.99046, 0.99037, 0.99032, 0.99028, 0.99026},
          {0.95527, 0.98148, 0.98130, 0.98121, 0.98112, 0.98108},
          {0.93754, 0.97300, 0.97275, 0.97261, 0.97249, 0.97243},
          {0.92205, 0.96499, 0.96465, 0.96448, 0.96432, 0.96425},
          {0.90838, 0.95739, 0.95699, 0.95678, 0.95659, 0.95662},
          {0.89621, 0.95018, 0.94972, 0.94948, 0.94925, 0.94936},
          {0.88530, 0.94333, 0.94281, 0.94254, 0.94228, 0.94201},
          {0.87543, 0.93681, 0.93623, 0.93593, 0.93565, 0.93565},
          {0.86647, 0.93060, 0.92996, 0.92964, 0.92933, 0.92885},
          {0.85828, 0.92467, 0.92398, 0.92363, 0.92330, 0.92273},
      },
      {},
      {},
  };
  return t;
}

}  // namespace levyq::cli
