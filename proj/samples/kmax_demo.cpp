// Compares the naive (k0) and corrected (k_max) phase times for one barrier.

#include <cstdio>

#include "tunnel/tunnel.hpp"

int main() {
    const tunnel::PacketSpec packet{1.0, 1.0, std::nullopt};
    for (double La : {0.05, 0.25, 0.5, 1.0}) {
        const tunnel::BarrierSpec barrier{4.0, La, 1.0};
        const auto res = tunnel::find_kmax(packet, barrier);
        std::printf("L/a = %.2f  k_max a = %.4f (%s)  t_T(k0) = %.4f  t_T(k_max) = %.4f\n", La, res.k_max,
                    std::string(tunnel::to_string(res.regime)).c_str(), tunnel::phase_time(packet.k0, barrier),
                    tunnel::phase_time(res.k_max, barrier));
    }
}
