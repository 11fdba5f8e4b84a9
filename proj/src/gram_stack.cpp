#include "lexvor/gram_stack.hpp"

#include <nlohmann/json.hpp>

namespace lexvor {

GramStack::GramStack(std::vector<MatD> mats) : mats_(std::move(mats)) {
  if (mats_.empty()) throw ValidationError("GramStack: need r >= 1 matrices");
  r_ = static_cast<int>(mats_.size());
  n_ = static_cast<int>(mats_[0].rows());
  validate(1e-12);
}

GramStack::GramStack(std::vector<MatQ> exact_mats) {
  if (exact_mats.empty()) throw ValidationError("GramStack: need r >= 1 matrices");
  r_ = static_cast<int>(exact_mats.size());
  n_ = static_cast<int>(exact_mats[0].rows());
  mats_.reserve(exact_mats.size());
  for (const auto& A : exact_mats) {
    if (A.rows() != n_ || A.cols() != n_) throw ValidationError("GramStack: ragged matrices");
    if (A != MatQ(A.transpose())) throw ValidationError("GramStack: matrix not symmetric");
    mats_.push_back(to_double(A));
  }
  exact_ = std::move(exact_mats);
  validate(1e-12);
}

void GramStack::validate(double sym_tol) const {
  if (n_ < 1 || r_ < 1) throw ValidationError("GramStack: need n >= 1 and r >= 1");
  for (const auto& A : mats_) {
    if (A.rows() != n_ || A.cols() != n_) throw ValidationError("GramStack: ragged matrices");
    double scale = std::max(1.0, A.norm());
    if ((A - MatD(A.transpose())).norm() > sym_tol * scale)
      throw ValidationError("GramStack: matrix not symmetric");
  }
}

GramStack GramStack::from_json(const nlohmann::json& j) {
  int n = j.at("n").get<int>();
  int r = j.at("r").get<int>();
  if (n < 1 || r < 1) throw ValidationError("GramStack: need n >= 1 and r >= 1");
  if (j.contains("exact")) {
    std::vector<MatQ> mats;
    for (const auto& flat : j.at("exact")) {
      if (static_cast<int>(flat.size()) != n * n)
        throw ValidationError("GramStack: matrix entry count mismatch");
      MatQ A(n, n);
      int k = 0;
      for (const auto& e : flat) {
        A(k / n, k % n) = parse_rational(e.get<std::string>());
        ++k;
      }
      mats.push_back(std::move(A));
    }
    if (static_cast<int>(mats.size()) != r) throw ValidationError("GramStack: r mismatch");
    return GramStack(std::move(mats));
  }
  std::vector<MatD> mats;
  for (const auto& flat : j.at("mats")) {
    if (static_cast<int>(flat.size()) != n * n)
      throw ValidationError("GramStack: matrix entry count mismatch");
    MatD A(n, n);
    int k = 0;
    for (const auto& e : flat) {
      A(k / n, k % n) = e.get<double>();
      ++k;
    }
    mats.push_back(std::move(A));
  }
  if (static_cast<int>(mats.size()) != r) throw ValidationError("GramStack: r mismatch");
  return GramStack(std::move(mats));
}

nlohmann::json GramStack::to_json() const {
  nlohmann::json j;
  j["n"] = n_;
  j["r"] = r_;
  auto mats = nlohmann::json::array();
  for (const auto& A : mats_) {
    auto flat = nlohmann::json::array();
    for (int i = 0; i < n_; ++i)
      for (int k = 0; k < n_; ++k) flat.push_back(A(i, k));
    mats.push_back(std::move(flat));
  }
  j["mats"] = std::move(mats);
  if (exact_) {
    auto ex = nlohmann::json::array();
    for (const auto& A : *exact_) {
      auto flat = nlohmann::json::array();
      for (int i = 0; i < n_; ++i)
        for (int k = 0; k < n_; ++k) flat.push_back(rational_to_string(A(i, k)));
      ex.push_back(std::move(flat));
    }
    j["exact"] = std::move(ex);
  }
  return j;
}

}  // namespace lexvor
