#ifndef BDDSTACK_BDDSTACK_HPP
#define BDDSTACK_BDDSTACK_HPP

#include <bddstack/doubles.hpp>
#include <bddstack/error.hpp>
#include <bddstack/expectations.hpp>
#include <bddstack/keywords.hpp>
#include <bddstack/parser.hpp>
#include <bddstack/report.hpp>
#include <bddstack/runner.hpp>
#include <bddstack/steps.hpp>
#include <bddstack/story.hpp>
#include <bddstack/value.hpp>

#endif  // BDDSTACK_BDDSTACK_HPP
