#include "lowfit/common.hpp"

#include <atomic>
#include <mutex>

namespace lowfit {

const char* err_name(Err e) {
  switch (e) {
    case Err::AsymmetricInput: return "AsymmetricInput";
    case Err::NegativeEntry: return "NegativeEntry";
    case Err::NonzeroDiagonal: return "NonzeroDiagonal";
    case Err::NonFinite: return "NonFinite";
    case Err::DimensionMismatch: return "DimensionMismatch";
    case Err::OddP: return "OddP";
    case Err::BadEpsilon: return "BadEpsilon";
    case Err::BadRange: return "BadRange";
    case Err::NumericalFailure: return "NumericalFailure";
    case Err::DegreeExceeded: return "DegreeExceeded";
    case Err::DegreeTooLow: return "DegreeTooLow";
    case Err::FixingNotOnGrid: return "FixingNotOnGrid";
    case Err::MissingTable: return "MissingTable";
    case Err::ZeroProbabilityEvent: return "ZeroProbabilityEvent";
    case Err::DegreeExhausted: return "DegreeExhausted";
    case Err::SizeTooLarge: return "SizeTooLarge";
    case Err::CutLimitReached: return "CutLimitReached";
    case Err::AllAnchorsInfeasible: return "AllAnchorsInfeasible";
    case Err::NotRegular: return "NotRegular";
    case Err::TooLarge: return "TooLarge";
    case Err::Infeasible: return "Infeasible";
    case Err::BadInput: return "BadInput";
  }
  return "Unknown";
}

void parallel_for(int count, int parallelism, const std::function<void(int)>& fn) {
  if (count <= 0) return;
  if (parallelism <= 1 || count == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  int workers = std::min(parallelism, count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::exception_ptr first_error = nullptr;
  std::mutex err_mu;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace lowfit
