#ifndef HFI_HFI_HPP
#define HFI_HFI_HPP

// Umbrella header: the whole library in dependency order.

#include "hfi/f2.hpp"
#include "hfi/model_complex.hpp"
#include "hfi/involution.hpp"
#include "hfi/cone.hpp"
#include "hfi/invariants.hpp"
#include "hfi/document.hpp"
#include "hfi/report.hpp"
#include "hfi/verify.hpp"
#include "hfi/cli.hpp"

#endif  // HFI_HFI_HPP
