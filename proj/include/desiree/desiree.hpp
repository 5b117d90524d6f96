#pragma once

#include "desiree/consistency.hpp"
#include "desiree/declarations.hpp"
#include "desiree/description.hpp"
#include "desiree/diagnostics.hpp"
#include "desiree/export.hpp"
#include "desiree/interpretation.hpp"
#include "desiree/lexer.hpp"
#include "desiree/loader.hpp"
#include "desiree/model.hpp"
#include "desiree/normal_form.hpp"
#include "desiree/operators.hpp"
#include "desiree/oracle.hpp"
#include "desiree/parser.hpp"
#include "desiree/query.hpp"
#include "desiree/rational.hpp"
#include "desiree/reasoner.hpp"
#include "desiree/strength.hpp"
