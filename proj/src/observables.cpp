#include "wfprop/observables.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "wfprop/grid.hpp"

namespace wfprop {

cplx autocorrelation(const WaveState& psi0, const WaveState& psi_t) {
    return inner(psi_t, psi0);
}

cplx error_deficit(const WaveState& exact, const WaveState& numeric) {
    return cplx(1.0, 0.0) - inner(exact, numeric);
}

double error_metric(const WaveState& exact, const WaveState& numeric) {
    return std::abs(error_deficit(exact, numeric));
}

TimeSeries spectrum(const TimeSeries& signal, bool cosine_window) {
    const std::size_t n = signal.size();
    if (n < 16) {
        throw std::invalid_argument("spectrum: needs at least 16 samples");
    }
    if (signal.v.size() != n) {
        throw std::invalid_argument("spectrum: ragged time series");
    }
    const double dt = signal.t[1] - signal.t[0];
    if (!(dt > 0.0)) {
        throw std::invalid_argument("spectrum: time samples must increase");
    }
    const double span = signal.t.back() - signal.t.front();
    for (std::size_t j = 0; j < n; ++j) {
        const double expected = signal.t.front() + static_cast<double>(j) * dt;
        if (std::abs(signal.t[j] - expected) > 1e-8 * (std::abs(span) + 1.0)) {
            throw std::invalid_argument("spectrum: time samples must be uniform");
        }
    }

    fftw_complex* buf = fftw_alloc_complex(n);
    if (buf == nullptr) throw std::bad_alloc();
    for (std::size_t j = 0; j < n; ++j) {
        double w = 1.0;
        if (cosine_window) {
            w = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(j) /
                                      static_cast<double>(n - 1)));
        }
        buf[j][0] = w * signal.v[j].real();
        buf[j][1] = w * signal.v[j].imag();
    }
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_BACKWARD,
                                FFTW_ESTIMATE);
    }
    fftw_execute(plan);

    std::vector<std::pair<double, double>> rows;
    rows.reserve(n);
    const double base = 2.0 * std::numbers::pi / (static_cast<double>(n) * dt);
    for (std::size_t k = 0; k < n; ++k) {
        const long long kk = static_cast<long long>(k);
        const long long signed_k =
            (kk < static_cast<long long>((n + 1) / 2)) ? kk : kk - static_cast<long long>(n);
        const double power = buf[k][0] * buf[k][0] + buf[k][1] * buf[k][1];
        rows.emplace_back(base * static_cast<double>(signed_k), power);
    }
    {
        std::lock_guard<std::mutex> lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(buf);

    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    TimeSeries out;
    out.t.reserve(n);
    out.v.reserve(n);
    for (const auto& [omega, power] : rows) out.push(omega, cplx(power, 0.0));
    return out;
}

void write_series_csv(const std::string& path, const TimeSeries& series) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("write_series_csv: cannot open " + path);
    f << "t,re,im\n" << std::setprecision(17);
    for (std::size_t j = 0; j < series.size(); ++j) {
        f << series.t[j] << ',' << series.v[j].real() << ',' << series.v[j].imag()
          << '\n';
    }
    if (!f) throw std::runtime_error("write_series_csv: write failed for " + path);
}

TimeSeries read_series_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("read_series_csv: cannot open " + path);
    std::string line;
    if (!std::getline(f, line)) {
        throw std::runtime_error("read_series_csv: empty file " + path);
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "t,re,im") {
        throw std::runtime_error("read_series_csv: unexpected header in " + path);
    }
    TimeSeries out;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        double t = 0.0, re = 0.0, im = 0.0;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &t, &re, &im) != 3) {
            throw std::runtime_error("read_series_csv: malformed row in " + path);
        }
        out.push(t, cplx(re, im));
    }
    return out;
}

void write_real_csv(const std::string& path, const std::vector<double>& t,
                    const std::vector<double>& value) {
    if (t.size() != value.size()) {
        throw std::invalid_argument("write_real_csv: ragged columns");
    }
    std::ofstream f(path);
    if (!f) throw std::runtime_error("write_real_csv: cannot open " + path);
    f << "t,value\n" << std::setprecision(17);
    for (std::size_t j = 0; j < t.size(); ++j) {
        f << t[j] << ',' << value[j] << '\n';
    }
    if (!f) throw std::runtime_error("write_real_csv: write failed for " + path);
}

}  // namespace wfprop
