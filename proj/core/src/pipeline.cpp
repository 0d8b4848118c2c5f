#include "fppu/pipeline.hpp"

#include <stdexcept>

namespace fppu {

Pipeline::Pipeline(PositConfig cfg, int latency, ReciprocalParams params)
    : cfg_(cfg), params_(params), stages_(static_cast<std::size_t>(latency)) {
  if (latency != 3 && latency != 4) throw std::invalid_argument("pipeline latency must be 3 or 4");
}

bool Pipeline::busy() const {
  for (const auto& s : stages_)
    if (s.valid) return true;
  return false;
}

void Pipeline::reset() {
  for (auto& s : stages_) s = {};
}

// Stage numbering: 0 conditions, the last one normalizes, the ones in
// between compute.
Pipeline::StageRegister Pipeline::advance(const StageRegister& from, int to_stage) const {
  if (!from.valid) return {};
  const int last = latency() - 1;
  StageRegister out;
  out.valid = true;
  if (to_stage == last) {
    const Computed& c = std::get<Computed>(from.payload);
    out.payload = normalize(c, cfg_);
  } else if (to_stage == 1) {
    Computed c = compute_first(std::get<Conditioned>(from.payload), cfg_, params_);
    if (latency() == 3) c = compute_second(c);
    out.payload = std::move(c);
  } else {
    out.payload = compute_second(std::get<Computed>(from.payload));
  }
  return out;
}

Pipeline::Output Pipeline::clock(bool valid_in, FppuOp op, std::uint32_t a, std::uint32_t b, std::uint32_t c) {
  Output out;
  const StageRegister& tail = stages_.back();
  if (tail.valid) {
    out.valid = true;
    out.result = std::get<std::uint32_t>(tail.payload);
  }
  for (int i = latency() - 1; i > 0; --i) stages_[i] = advance(stages_[i - 1], i);
  stages_[0] = {};
  if (valid_in) {
    stages_[0].valid = true;
    stages_[0].payload = condition(op, a, b, c, cfg_);
  }
  return out;
}

}  // namespace fppu
