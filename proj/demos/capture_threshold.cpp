// Sweeps the diameter budget across the moment-curve capture threshold
// 2 pi k / (2k+1) and prints what the zero-capture solver finds on each side.

#include <cstdio>

#include "pcode/capture.hpp"

using namespace pcode;

int main() {
    const int k = 1;
    const double threshold = 2.0 * kPi * k / (2 * k + 1);
    SearchOptions opts;
    opts.restarts = 24;
    opts.max_iterations = 5000;
    opts.seed = 7;

    std::printf("moment curve k=%d, capture threshold %.6f\n", k, threshold);
    for (double offset : {-0.10, -0.05, -0.02, 0.02, 0.05, 0.10}) {
        const double delta = threshold + offset;
        auto r = find_zero_capture(sm_map(k), delta, opts);
        std::printf("  delta %.4f: %s  best residual %.3e  diameter %.4f  atoms %zu\n", delta,
                    r.success ? "captured" : "no certificate", r.best.residual, r.best.diameter,
                    r.best.atoms.size());
    }
    return 0;
}
