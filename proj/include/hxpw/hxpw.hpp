#pragma once

#include "hxpw/certify.hpp"
#include "hxpw/field.hpp"
#include "hxpw/geometry.hpp"
#include "hxpw/hx_scheme.hpp"
#include "hxpw/io.hpp"
#include "hxpw/pw_scheme.hpp"
#include "hxpw/scheme.hpp"
