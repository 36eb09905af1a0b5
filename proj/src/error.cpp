#include "tarmac/error.hpp"

namespace tarmac {

void require(bool cond, const std::string& what) {
    if (!cond) throw ContractError(what);
}

}  // namespace tarmac
