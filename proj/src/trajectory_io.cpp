#include <cstdio>
#include <ostream>

#include <json.hpp>

#include "blowup/dynamics.hpp"

namespace blowup {

void write_csv(std::ostream& os, const Trajectory& traj) {
    os << "t,E,lp_u,grad_u,l2_v,D,H,Z,u_inf\n";
    char line[512];
    for (const Sample& s : traj.samples) {
        std::snprintf(line, sizeof line, "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", s.t, s.E,
                      s.lp_u, s.grad_u, s.l2_v, s.D, s.H, s.Z, s.u_inf);
        os << line;
    }
}

void write_ndjson(std::ostream& os, const Trajectory& traj) {
    for (const Sample& s : traj.samples) {
        nlohmann::ordered_json j;
        j["t"] = s.t;
        j["E"] = s.E;
        j["lp_u"] = s.lp_u;
        j["grad_u"] = s.grad_u;
        j["l2_v"] = s.l2_v;
        j["D"] = s.D;
        j["H"] = s.H;
        j["Z"] = s.Z;
        j["u_inf"] = s.u_inf;
        j["l2_u"] = s.l2_u;
        j["u_dot_v"] = s.u_dot_v;
        j["energy_scale"] = s.energy_scale;
        j["dt"] = s.dt;
        os << j.dump() << '\n';
    }
}

}  // namespace blowup
