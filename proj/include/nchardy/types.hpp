#pragma once

#include <complex>
#include <functional>
#include <string>

#include <Eigen/Dense>

namespace nchardy {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

// Non-fatal notices (near-boundary evaluation and the like). Defaults to stderr.
using WarningHandler = std::function<void(const std::string&)>;
void set_warning_handler(WarningHandler h);
void warn(const std::string& msg);

}  // namespace nchardy
