#ifndef NTUPLE_NTUPLE_HPP
#define NTUPLE_NTUPLE_HPP

#include "ntuple/precision.hpp"
#include "ntuple/arith.hpp"
#include "ntuple/series.hpp"
#include "ntuple/lfunction.hpp"
#include "ntuple/formal_series.hpp"
#include "ntuple/saddle.hpp"
#include "ntuple/asymptotics.hpp"
#include "ntuple/inequalities.hpp"
#include "ntuple/io.hpp"

#endif  // NTUPLE_NTUPLE_HPP
