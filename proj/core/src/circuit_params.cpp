#include "relaxosc/circuit_params.hpp"

#include <cmath>
#include <sstream>

#include "relaxosc/errors.hpp"

namespace relaxosc {

CircuitParams CircuitParams::create(const SwitchParams& sw, double i0, double c1, double c2, double r) {
    if (!std::isfinite(c1) || !(c1 > 0.0)) {
        throw InvalidParameter("circuit: violated c1 > 0");
    }
    if (!std::isfinite(c2) || !(c2 > 0.0)) {
        throw InvalidParameter("circuit: violated c2 > 0");
    }
    if (!std::isfinite(r) || !(r >= 0.0)) {
        throw InvalidParameter("circuit: violated r >= 0");
    }
    const NdrWindow w = ndr_window(sw);
    if (!std::isfinite(i0) || !w.contains(i0)) {
        std::ostringstream os;
        os.precision(6);
        os << "circuit: i0 = " << i0 << " A outside the NDR window, violated i_th < i0 < i_h with i_th = "
           << w.i_th << " A, i_h = " << w.i_h << " A";
        throw InvalidParameter(os.str());
    }
    return CircuitParams(sw, i0, c1, c2, r);
}

CircuitParams CircuitParams::with_r(double r) const {
    return create(sw_, i0_, c1_, c2_, r);
}

CircuitParams CircuitParams::with_capacitances(double c1, double c2) const {
    return create(sw_, i0_, c1, c2, r_);
}

}  // namespace relaxosc
