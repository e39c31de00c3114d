#include "fracschrod/diagnostics.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace fracschrod {

double discrete_mass(const ComplexField& u) { return field_l2_norm(u); }

double discrete_energy(const ComplexField& u_n, const ComplexField& u_np1,
                       const FracLaplacian& op) {
    require_conforms(u_n, u_np1, "discrete_energy");
    if (!u_n.grid().same_mesh(op.grid())) {
        throw std::invalid_argument("discrete_energy: fields do not conform to the operator grid");
    }
    const double qa = op.energy_quadratic_form(u_n);
    const double qb = op.energy_quadratic_form(u_np1);
    long double quartic = 0.0L;
    const Complex* a = u_n.data();
    const Complex* b = u_np1.data();
    for (std::size_t i = 0; i < u_n.size(); ++i) {
        quartic += static_cast<long double>(std::norm(a[i])) * std::norm(b[i]);
    }
    const double hxy = u_n.grid().hx() * u_n.grid().hy();
    return 0.5 * (qa + qb) - 0.5 * hxy * static_cast<double>(quartic);
}

void write_diagnostics_csv(const std::filesystem::path& path,
                           const std::vector<DiagnosticsRecord>& series, int stride) {
    if (stride < 1) stride = 1;
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("write_diagnostics_csv: cannot open " + path.string());
    }
    out << "n,t,mass,energy,linf_error,iterations,residual\n";
    char line[256];
    for (const DiagnosticsRecord& r : series) {
        if (r.step % stride != 0) continue;
        std::snprintf(line, sizeof(line), "%d,%.17g,%.17g,%.17g,", r.step, r.time, r.mass, r.energy);
        out << line;
        if (r.linf_error) {
            std::snprintf(line, sizeof(line), "%.17g", *r.linf_error);
            out << line;
        }
        std::snprintf(line, sizeof(line), ",%d,%.17g\n", r.solver.iterations,
                      r.solver.final_residual);
        out << line;
    }
}

}  // namespace fracschrod
