#include "miner/schema.hpp"

namespace miner {

const char* to_string(ChangeKind k) {
    switch (k) {
    case ChangeKind::ADDED: return "ADDED";
    case ChangeKind::MODIFIED: return "MODIFIED";
    case ChangeKind::DELETED: return "DELETED";
    }
    return "?";
}

const char* to_string(FileKind k) {
    switch (k) {
    case FileKind::SOURCE_JAVA: return "SOURCE_JAVA";
    case FileKind::OTHER: return "OTHER";
    }
    return "?";
}

const char* to_string(DeclarationKind k) {
    switch (k) {
    case DeclarationKind::CLASS: return "CLASS";
    case DeclarationKind::INTERFACE: return "INTERFACE";
    case DeclarationKind::ENUM: return "ENUM";
    case DeclarationKind::ANNOTATION_DECL: return "ANNOTATION_DECL";
    }
    return "?";
}

const char* to_string(StatementKind k) {
    switch (k) {
    case StatementKind::BLOCK: return "BLOCK";
    case StatementKind::IF: return "IF";
    case StatementKind::FOR: return "FOR";
    case StatementKind::WHILE: return "WHILE";
    case StatementKind::RETURN: return "RETURN";
    case StatementKind::EXPR: return "EXPR";
    case StatementKind::OTHER: return "OTHER";
    }
    return "?";
}

const char* to_string(ExpressionKind k) {
    switch (k) {
    case ExpressionKind::CALL: return "CALL";
    case ExpressionKind::LITERAL: return "LITERAL";
    case ExpressionKind::OTHER: return "OTHER";
    }
    return "?";
}

const char* to_string(ModifierKind k) {
    switch (k) {
    case ModifierKind::VISIBILITY: return "VISIBILITY";
    case ModifierKind::STATIC: return "STATIC";
    case ModifierKind::FINAL: return "FINAL";
    case ModifierKind::ABSTRACT: return "ABSTRACT";
    case ModifierKind::SYNCHRONIZED: return "SYNCHRONIZED";
    case ModifierKind::ANNOTATION: return "ANNOTATION";
    case ModifierKind::OTHER: return "OTHER";
    }
    return "?";
}

} // namespace miner
