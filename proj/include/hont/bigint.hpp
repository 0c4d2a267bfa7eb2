#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace hont {

using BigInt = boost::multiprecision::cpp_int;

}  // namespace hont
