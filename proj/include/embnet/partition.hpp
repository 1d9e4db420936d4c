#pragma once

#include <cstdint>
#include <limits>
#include <vector>

namespace embnet {

// Node -> community assignment with dense ids 0..c-1. `q` is the modularity
// of the assignment on the graph it was computed for; NaN when the partition
// was not scored (e.g. planted ground truth).
struct Partition {
    std::vector<std::int32_t> labels;
    double q = std::numeric_limits<double>::quiet_NaN();

    std::size_t size() const { return labels.size(); }

    std::size_t num_communities() const {
        std::int32_t max_label = -1;
        for (std::int32_t c : labels) {
            if (c > max_label) max_label = c;
        }
        return static_cast<std::size_t>(max_label + 1);
    }
};

} // namespace embnet
