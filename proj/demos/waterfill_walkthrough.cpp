// Narrated water-filling run on a triangle, then on a small hard instance.
// Shows the pour log, the final levels and duals, and the edge certificate.
#include <cstdio>
#include <utility>
#include <vector>

#include <fomatch/fomatch.hpp>

using namespace fomatch;

namespace {

void narrate(const char* title, const instance& inst) {
    std::printf("== %s: %d vertices, %zu edges ==\n", title, inst.n, inst.edges.size());
    const fractional_outcome out = run_waterfill(inst, linear_gain());

    for (const pour_record& rec : out.pours) {
        std::printf("deadline of %d: capacity %.4f, waterline %.4f, poured %.4f\n", rec.active,
                    rec.capacity, rec.waterline, rec.poured);
        for (const level_raise& r : rec.raises)
            std::printf("    raises %d from %.4f to %.4f\n", r.index, r.from, r.to);
    }

    std::printf("vertex   x        p        alpha\n");
    for (vertex_id v = 0; v < inst.n; ++v)
        std::printf("%4d   %.4f   %.4f   %.4f\n", v, out.x[v], out.p[v], out.alpha[v]);

    const cert_report cert = certify_duals(out, inst);
    std::printf("matched mass %.6f, min edge dual sum %.6f vs floor %.6f -> %s\n", out.total,
                cert.min_edge_sum, water_ratio(), cert.pass ? "certified" : "VIOLATED");
    const auto opt = inst.bipartite() ? opt_bipartite(inst) : opt_fractional_general(inst);
    if (opt.half_units > 0)
        std::printf("offline optimum %.1f, achieved ratio %.6f\n\n", opt.value(),
                    2.0 * out.total / static_cast<double>(opt.half_units));
    else
        std::printf("offline optimum 0\n\n");
}

}  // namespace

int main() {
    // triangle expiring 0, 1, 2: vertex 0 pours half an edge onto each
    // neighbor, and everything still ends fully matched
    instance triangle =
        from_deadline_order(3, {{0, 1}, {0, 2}, {1, 2}}, {0, 1, 2});
    narrate("triangle", triangle);

    // the adversarial family at its smallest interesting size
    narrate("hard instance k=2 m=2", gen_wf_hard_instance(2, 2));
    return 0;
}
