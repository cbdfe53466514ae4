#pragma once

#include <string>
#include <vector>

#include "wfprop/state.hpp"

namespace wfprop {

// <psi(t)|psi(0)>
cplx autocorrelation(const WaveState& psi0, const WaveState& psi_t);

// 1 - <exact|numeric>; the magnitude is the headline error number.
cplx error_deficit(const WaveState& exact, const WaveState& numeric);
double error_metric(const WaveState& exact, const WaveState& numeric);

struct TimeSeries {
    std::vector<double> t;
    std::vector<cplx> v;

    std::size_t size() const { return t.size(); }
    void push(double time, cplx value) {
        t.push_back(time);
        v.push_back(value);
    }
};

// Power spectrum of a uniformly sampled complex signal against e^{+i w t},
// frequencies returned in ascending order. The optional taper suppresses
// truncation ringing from the finite record.
TimeSeries spectrum(const TimeSeries& signal, bool cosine_window = true);

// Columns t,re,im with 17 significant digits.
void write_series_csv(const std::string& path, const TimeSeries& series);
TimeSeries read_series_csv(const std::string& path);

// Columns t,value with 17 significant digits.
void write_real_csv(const std::string& path, const std::vector<double>& t,
                    const std::vector<double>& value);

}  // namespace wfprop
