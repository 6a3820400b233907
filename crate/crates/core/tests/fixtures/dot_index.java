interface Named {
    default String packageName() {
        return name().substring(0, name().lastIndexOf('.'));
    }
    default String simpleName() {
        final int dotIdx = name().lastIndexOf('.');
        if (dotIdx < 0) {
            return name();
        } else {
            return name().substring(dotIdx + 1);
        }
    }
}
