#pragma once

#include "misiu/certificate.hpp"
#include "misiu/errors.hpp"
#include "misiu/modp.hpp"
#include "misiu/newton.hpp"
#include "misiu/orbit.hpp"
#include "misiu/poly.hpp"
#include "misiu/verify.hpp"
