#pragma once

#include "lmg/model.hpp"

namespace bench {

inline lmg::ModelParams strong_drive(int n) {
  lmg::ModelParams p;
  p.h = -1.0;
  p.gamma0x = -1.0;
  p.gamma1x = 210.0;
  p.gammay = 2.0;
  p.omega = 40.0;
  p.n_particles = n;
  return p;
}

}  // namespace bench
