#include "sst/report.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "sst/sampling.hpp"

namespace sst::report {

std::string_view to_string(Status s) {
    switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Inconclusive: return "inconclusive";
    default: return "info";
    }
}

std::string manifest_digest(std::string_view source) {
    std::ostringstream os;
    os << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(source);
    return os.str();
}

json extended_real(double v) {
    if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
    return json(v);
}

Document::Document(std::string command, const manifest::Manifest& m)
    : command_(std::move(command)), t0_(std::chrono::steady_clock::now()) {
    const warped::StaticSpacetime& S = m.spacetime;
    header_["tool"] = "sstcurv";
    header_["version"] = "0.1.0";
    header_["command"] = command_;
    header_["manifest_path"] = m.origin;
    header_["manifest_digest"] = manifest_digest(m.source);

    json sp;
    sp["fiber_coords"] = S.fiber_chart().coords();
    json dom;
    for (int i = 0; i < S.fiber_dim(); ++i) {
        const geom::Interval& iv = S.fiber_chart().domain()[static_cast<std::size_t>(i)];
        dom[S.fiber_chart().coords()[static_cast<std::size_t>(i)]] = {iv.lo, iv.hi};
    }
    sp["fiber_domain"] = std::move(dom);
    sp["singular_margin"] = S.fiber_chart().margin();
    sp["time_interval"] = {extended_real(S.t1()), extended_real(S.t2())};
    const geom::Interval tw = S.t_sample_window();
    sp["time_sample_window"] = {tw.lo, tw.hi};
    sp["warp"] = S.warp().print();
    json flags;
    flags["compact"] = S.flags().compact;
    flags["complete"] = S.flags().complete;
    flags["ricci_flat"] = S.flags().ricci_flat;
    sp["declared_flags"] = std::move(flags);
    sp["declared_inf_f"] = S.declared_inf_f() ? json(*S.declared_inf_f()) : json(nullptr);
    sp["declared_sup_f"] = S.declared_sup_f() ? json(*S.declared_sup_f()) : json(nullptr);
    header_["spacetime"] = std::move(sp);

    json num;
    num["samples"] = m.numerics.samples;
    num["causal_samples"] = m.numerics.causal_samples;
    num["seed"] = m.numerics.seed;
    num["tol"] = m.numerics.tol;
    num["step"] = m.numerics.step;
    header_["numerics"] = std::move(num);
}

json& Document::add(std::string name, Status s) {
    switch (s) {
    case Status::Pass: ++pass_; break;
    case Status::Fail: ++fail_; break;
    case Status::Inconclusive: ++inconclusive_; break;
    case Status::Info: ++info_; break;
    }
    json rec;
    rec["name"] = std::move(name);
    rec["status"] = to_string(s);
    checks_.push_back(std::move(rec));
    return checks_.back();
}

int Document::exit_code() const {
    if (fail_ > 0) return 1;
    if (inconclusive_ > 0) return 2;
    return 0;
}

json Document::render(bool include_wall_clock) const {
    json doc = header_;
    doc["checks"] = checks_;
    json sum;
    sum["pass"] = pass_;
    sum["fail"] = fail_;
    sum["inconclusive"] = inconclusive_;
    sum["info"] = info_;
    sum["exit_code"] = exit_code();
    doc["summary"] = std::move(sum);
    if (include_wall_clock) {
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                            std::chrono::steady_clock::now() - t0_)
                            .count();
        doc["wall_clock_ms"] = ms;
    }
    return doc;
}

void Document::write(std::ostream& out, bool include_wall_clock) const {
    out << render(include_wall_clock).dump(2) << "\n";
}

} // namespace sst::report
