#pragma once

#include "xdiscord/entropy.hpp"
#include "xdiscord/errors.hpp"
#include "xdiscord/xstate.hpp"
#include "xdiscord/discord.hpp"
#include "xdiscord/oracle.hpp"
#include "xdiscord/entanglement.hpp"
#include "xdiscord/io.hpp"
