#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tvdd/grid.hpp"

namespace tvdd {

/// Reads a greyscale image (PGM P2/P5 at 8 or 16 bit, or greyscale PNG)
/// into a 1-channel field with intensities mapped to [0,1]. The first
/// axis is the image row, the second the column. Color images are refused.
GridFunction load_image(const std::string& path);

/// Writes a 1-channel field as an 8-bit greyscale image (binary PGM or
/// PNG, selected by extension), clamping to [0,1] and quantizing. A
/// load(save(u)) round trip moves every pixel by at most 1/510.
void save_image(const GridFunction& u, const std::string& path);

/// Writes a 3-channel field in [0,1] as an 8-bit RGB PNG.
void save_color_image(const GridFunction& rgb, const std::string& path);

/// Writes "k,energy" rows; row i carries k = i * k_scale, so solvers whose
/// steps cost 1/k_scale subproblem iterations plot on a comparable axis.
void write_energy_csv(const std::vector<double>& values, double k_scale, const std::string& path);

/// Writes "k,glob_energy,ddseq_energy,ddpar_energy" rows. Row k samples
/// the global trace at index k * glob_stride (clamped to its last entry),
/// so one row of each column represents the same amount of work.
void write_comparison_csv(const std::vector<double>& glob, std::size_t glob_stride,
                          const std::vector<double>& seq, const std::vector<double>& par,
                          const std::string& path);

/// Writes one "x1,x2,u1,u2" row per lattice point of a 2-D two-channel
/// displacement field.
void write_flow_csv(const GridFunction& flow, const std::string& path);

}  // namespace tvdd
