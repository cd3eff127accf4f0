// Prints the explicit line packings with their certified minimal angles and
// the thickening scale pi - angle each one certifies.

#include <cstdio>

#include "pcode/code.hpp"

using namespace pcode;

namespace {

void row(const char* name, const ProjectiveCode& code) {
    std::printf("%-18s %4zu lines in RP^%d   min angle %.9f   scale %.9f\n", name,
                code.lines.size(), code.dim, code.min_distance, thickening_scale(code));
}

} // namespace

int main() {
    row("hypercube d=4", hypercube_code(4));
    row("hypercube d=8", hypercube_code(8));
    const auto lat = lattice_code_info(3, 2);
    std::printf("%-18s shell |x|^2 = %d with %d points\n", "lattice d=3 n=2", lat.shell_norm,
                lat.point_count);
    row("", lat.code);
    row("icosahedron", icosahedron_code());
    row("600-cell", cell600_code());
    row("circle n=5", circle_code(5));

    SearchOptions opts;
    opts.restarts = 24;
    opts.max_iterations = 5000;
    opts.seed = 1;
    row("searched RP^2 x6", search_code(2, 6, opts));
    return 0;
}
