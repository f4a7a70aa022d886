#pragma once

#include "qiw/abelian.hpp"
#include "qiw/analysis.hpp"
#include "qiw/bigint.hpp"
#include "qiw/classgroup.hpp"
#include "qiw/errors.hpp"
#include "qiw/field.hpp"
#include "qiw/ideal.hpp"
#include "qiw/invariants.hpp"
#include "qiw/knotfile.hpp"
#include "qiw/local.hpp"
#include "qiw/logclass.hpp"
#include "qiw/padic.hpp"
#include "qiw/ray.hpp"
#include "qiw/scan.hpp"
#include "qiw/verdicts.hpp"
