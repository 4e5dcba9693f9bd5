#include "forms_impl.hpp"

namespace tmcalc {

TMCALC_INSTANTIATE_FORMS(FdScalar)

} // namespace tmcalc
