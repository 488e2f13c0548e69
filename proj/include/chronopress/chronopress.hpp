#pragma once

#include "chronopress/burst.hpp"
#include "chronopress/categorize.hpp"
#include "chronopress/corpus.hpp"
#include "chronopress/date.hpp"
#include "chronopress/error.hpp"
#include "chronopress/events.hpp"
#include "chronopress/index.hpp"
#include "chronopress/lexicon.hpp"
#include "chronopress/segmentation.hpp"
#include "chronopress/text.hpp"
