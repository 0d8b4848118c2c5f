#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "fppu/datapath.hpp"

namespace fppu {

/// Cycle model of the pipelined unit with its valid_in/valid_out handshake.
///
/// Each clock() is one rising edge: the value returned is what the output
/// register held going into the edge, then every stage register advances and
/// stage 1 latches the new operation when valid_in is high. An operation
/// accepted on edge t is therefore reported with valid_out on edge
/// t + latency. Latency 3 runs compute as one stage; latency 4 splits it so
/// division gets a reciprocal stage and a final-multiply stage.
///
/// A Pipeline is single-owner state: it may move between threads between
/// clocks but must never be clocked concurrently.
class Pipeline {
public:
  struct Output {
    bool valid = false;
    std::uint32_t result = 0;
  };

  struct StageRegister {
    bool valid = false;
    std::variant<std::monostate, Conditioned, Computed, std::uint32_t> payload;
  };

  explicit Pipeline(PositConfig cfg, int latency = 3, ReciprocalParams params = {});

  Output clock(bool valid_in, FppuOp op = FppuOp::PADD, std::uint32_t a = 0, std::uint32_t b = 0,
               std::uint32_t c = 0);

  int latency() const { return static_cast<int>(stages_.size()); }
  const std::vector<StageRegister>& stages() const { return stages_; }
  const PositConfig& config() const { return cfg_; }
  /// True while any stage register holds a valid operation.
  bool busy() const;
  void reset();

private:
  StageRegister advance(const StageRegister& from, int to_stage) const;

  PositConfig cfg_;
  ReciprocalParams params_;
  std::vector<StageRegister> stages_;
};

}  // namespace fppu
