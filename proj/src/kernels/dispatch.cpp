#include "qrskit/kernels/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace qrskit::kernels {

const KernelTable& active() {
    static const KernelTable& chosen = [] () -> const KernelTable& {
        const char* forced = std::getenv("QRSKIT_KERNELS");
        if (forced != nullptr && std::string_view(forced) == "scalar") {
            return scalar_table();
        }
        if (const KernelTable* wide = avx2_table()) {
            return *wide;
        }
        return scalar_table();
    }();
    return chosen;
}

std::vector<const KernelTable*> available_tables() {
    std::vector<const KernelTable*> tables{&scalar_table()};
    if (const KernelTable* wide = avx2_table()) {
        tables.push_back(wide);
    }
    return tables;
}

}  // namespace qrskit::kernels
