#ifndef TFSEL_TFSEL_HPP
#define TFSEL_TFSEL_HPP

#include "tfsel/classify.hpp"
#include "tfsel/corpus.hpp"
#include "tfsel/errors.hpp"
#include "tfsel/eval.hpp"
#include "tfsel/experiment.hpp"
#include "tfsel/porter_stemmer.hpp"
#include "tfsel/preprocess.hpp"
#include "tfsel/scoring.hpp"
#include "tfsel/stopwords.hpp"
#include "tfsel/term_stats.hpp"
#include "tfsel/weighting.hpp"

#endif  // TFSEL_TFSEL_HPP
